import logging
from typing import Sequence

import numpy as np
from scipy import linalg

from app.core.exceptions import DegenerateMetricError, DomainError, NumericalFailure, SpecValidationError
from app.core.models.algebra import LieAlgebra, Mat, Vec
from app.core.models.growth import (
    Bounded, Exponential, GrowthFit, GrowthReport, IncompleteGeodesic, Linear,
    Polynomial, PrimaryBound, UndeterminedFit,
)
from app.core.models.metric import MetricForm
from app.core.monitoring.metrics import track_growth_scan, track_newton_restart
from app.core.setting import config
from app.modules.algebra import AlgebraService
from app.modules.metric import MetricService

logger = logging.getLogger(__name__)

EXPONENTIAL_MIN_RATE = 0.1
EXPONENTIAL_MIN_R2 = 0.999
BOUNDED_MAX_SLOPE = 0.1
BOUNDED_MAX_RANGE = 1.5


class GrowthService:
    """
    Growth of the adjoint representation and the searches that feed the verdict.

    Handles:
    - Operator norms λ± of Ad w.r.t. g̃
    - One-parameter scans of ‖exp(t ad_a)‖ and their classification
    - Idempotent search (Newton with random restarts)
    - Invariant positive definite forms for representations
    - Primary bounding-function families
    """

    # ==================== OPERATOR NORMS ====================

    @staticmethod
    def _relative_spectrum(A: Mat, gTilde: Mat) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            AstarA = A.T @ gTilde @ A
        if not np.all(np.isfinite(AstarA)):
            raise NumericalFailure("Adjoint matrix too large for the g̃-norm: A^T g̃ A overflowed")
        try:
            return linalg.eigh(AstarA, gTilde, eigvals_only=True)
        except linalg.LinAlgError as e:
            raise DegenerateMetricError(f"Reference form is not positive definite: {e}") from e

    @staticmethod
    def ad_operator_norm(A: Mat, gTilde: Mat) -> float:
        """λ₊ = sqrt(max eigenvalue of A*A), A* the g̃-adjoint."""
        w = GrowthService._relative_spectrum(A, gTilde)
        return float(np.sqrt(max(w[-1], 0.0)))

    @staticmethod
    def adjoint_bounds(A: Mat, gTilde: Mat) -> tuple[float, float]:
        """(λ₊, λ₋): largest and smallest g̃-singular values of A."""
        w = GrowthService._relative_spectrum(A, gTilde)
        return float(np.sqrt(max(w[-1], 0.0))), float(np.sqrt(max(w[0], 0.0)))

    # ==================== ONE-PARAMETER SCANS ====================

    @staticmethod
    def default_grid() -> np.ndarray:
        return np.geomspace(config.GROWTH_T_MIN, config.GROWTH_T_MAX, config.GROWTH_POINTS)

    @staticmethod
    def one_param_growth_scan(
        alg: LieAlgebra,
        a: Vec,
        gTilde: Mat,
        t_grid: Sequence[float] | None = None,
    ) -> GrowthReport:
        """Sample ‖Ad_{exp(ta)}‖ = ‖expm(t ad_a)‖ for a normalised to g̃-length one."""
        a = np.asarray(a, dtype=np.float64)
        length = float(np.sqrt(a @ gTilde @ a))
        if length == 0.0:
            raise SpecValidationError("Scan direction must be nonzero")
        a = a / length
        t_grid = GrowthService.default_grid() if t_grid is None else np.asarray(t_grid, dtype=np.float64)
        if np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
            raise SpecValidationError("Growth grid must be positive and strictly increasing")

        ad_a = AlgebraService.ad_matrix(alg, a)
        norms = []
        truncated = False
        for t in t_grid:
            with np.errstate(over="ignore", invalid="ignore"):
                Ad = linalg.expm(t * ad_a)
            if not np.all(np.isfinite(Ad)):
                truncated = True
                break
            try:
                norm = GrowthService.ad_operator_norm(Ad, gTilde)
            except NumericalFailure:
                truncated = True
                break
            if not np.isfinite(norm):
                truncated = True
                break
            norms.append(norm)

        if truncated:
            logger.warning(f"Growth scan overflowed at t={t:.6g}; grid truncated to {len(norms)} samples")
        return GrowthReport(
            direction=a, times=t_grid[:len(norms)].copy(), norms=np.array(norms), truncated=truncated,
        )

    @staticmethod
    def _regress(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
        """Least-squares slope and R² (R² = 1 when y is constant)."""
        slope, intercept = np.polyfit(x, y, 1)
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        if ss_tot == 0.0:
            return float(slope), 1.0
        ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
        return float(slope), 1.0 - ss_res / ss_tot

    @staticmethod
    def growth_classify(times: Sequence[float], norms: Sequence[float]) -> tuple[GrowthFit, float]:
        """
        Fit the trailing half of the grid with an exponential model (log‖Ad‖ vs t)
        and a power model (log‖Ad‖ vs log t).
        """
        times = np.asarray(times, dtype=np.float64)
        norms = np.asarray(norms, dtype=np.float64)
        if len(times) < 20 or times[-1] < 100.0 * times[0]:
            return UndeterminedFit("need at least 20 samples spanning two decades"), 0.0

        half = len(times) // 2
        t = times[half:]
        log_norm = np.log(norms[half:])

        rate, r2_exp = GrowthService._regress(t, log_norm)
        if rate >= EXPONENTIAL_MIN_RATE and r2_exp >= EXPONENTIAL_MIN_R2:
            return Exponential(rate=rate), r2_exp

        slope, r2_pow = GrowthService._regress(np.log(t), log_norm)
        degree = int(round(slope))
        if degree >= 2:
            return Polynomial(degree=degree), r2_pow
        if degree == 1:
            return Linear(), r2_pow
        if slope < BOUNDED_MAX_SLOPE and norms[half:].max() < BOUNDED_MAX_RANGE * norms[half:].min():
            return Bounded(), r2_pow
        return UndeterminedFit(f"log-log slope {slope:.3g} matches no class"), r2_pow

    @staticmethod
    def scan_and_classify(
        alg: LieAlgebra, a: Vec, gTilde: Mat, t_grid: Sequence[float] | None = None,
    ) -> GrowthReport:
        report = GrowthService.one_param_growth_scan(alg, a, gTilde, t_grid)
        fit, residual = GrowthService.growth_classify(report.times, report.norms)
        track_growth_scan(fit.kind)
        logger.debug(f"Growth along {np.round(report.direction, 6)}: {fit} (R²={residual:.6f})")
        return GrowthReport(
            direction=report.direction, times=report.times, norms=report.norms,
            fit=fit, residual=residual, truncated=report.truncated,
        )

    # ==================== IDEMPOTENTS ====================

    @staticmethod
    def _newton(alg: LieAlgebra, metric: MetricForm, x: Vec, tol: float, max_iter: int):
        """Damped Newton on F(x) = ad†_x x − x. Returns (x, residual, outcome)."""
        G = metric.G
        C = alg.structure
        eye = np.eye(alg.dim)

        def residual_of(z):
            ad = AlgebraService.ad_matrix(alg, z)
            return np.linalg.solve(G, ad.T @ (G @ z)) - z

        F = residual_of(x)
        res = float(np.linalg.norm(F))
        for _ in range(max_iter):
            if res <= tol:
                return x, res, "converged"
            ad = AlgebraService.ad_matrix(alg, x)
            Gx = G @ x
            # d/dx of G^-1 ad_x^T G x
            J = np.linalg.solve(G, ad.T @ G + np.einsum("ijk,k->ji", C, Gx)) - eye
            try:
                dx = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                return x, res, "singular"

            step = 1.0
            while step > 1e-8:
                candidate = x + step * dx
                F_new = residual_of(candidate)
                res_new = float(np.linalg.norm(F_new))
                if np.isfinite(res_new) and res_new < res:
                    break
                step *= 0.5
            else:
                return x, res, "diverged"
            x, F, res = candidate, F_new, res_new
        return x, res, "converged" if res <= tol else "exhausted"

    @staticmethod
    def idempotent_search(
        alg: LieAlgebra,
        metric: MetricForm,
        restarts: int | None = None,
        tol: float | None = None,
        seed: int | None = None,
    ) -> list[np.ndarray]:
        """
        Nonzero roots of ad†_x x = x from random unit starts, deduplicated.
        Definite metrics return [] immediately: an idempotent is a null vector.
        """
        restarts = config.NEWTON_RESTARTS if restarts is None else restarts
        tol = config.NEWTON_TOL if tol is None else tol
        seed = config.SEED if seed is None else seed

        frame = MetricService.signature_decompose(metric)
        if frame.definite:
            logger.debug("Definite metric: no idempotents exist")
            return []

        rng = np.random.default_rng(seed)
        found: list[np.ndarray] = []
        for _ in range(restarts):
            start = rng.standard_normal(alg.dim)
            start /= np.linalg.norm(start)
            x, res, outcome = GrowthService._newton(alg, metric, start, tol, config.NEWTON_MAX_ITER)
            track_newton_restart(outcome)
            if outcome != "converged" or np.linalg.norm(x) < config.IDEMPOTENT_DEDUP:
                continue
            if all(np.linalg.norm(x - y) > config.IDEMPOTENT_DEDUP for y in found):
                found.append(x)

        found.sort(key=lambda v: tuple(-np.round(v, 9)))
        logger.info(f"Idempotent search found {len(found)} root(s) in {restarts} restarts")
        return found

    @staticmethod
    def idempotent_residual(alg: LieAlgebra, metric: MetricForm, x0: Vec) -> float:
        ad = AlgebraService.ad_matrix(alg, x0)
        return float(np.linalg.norm(MetricService.metric_adjoint(ad, metric) @ x0 - x0))

    @staticmethod
    def idempotent_eigenvector(alg: LieAlgebra, x0: Vec, tol: float = 1e-8) -> np.ndarray:
        """Unit y0 with ad_{x0} y0 = y0; along exp(t x0) it makes ‖Ad‖ grow like e^t."""
        ad = AlgebraService.ad_matrix(alg, x0)
        w, V = np.linalg.eig(ad)
        k = int(np.argmin(np.abs(w - 1.0)))
        if abs(w[k] - 1.0) > tol:
            raise NumericalFailure(f"ad_x0 has no eigenvalue 1 (closest {w[k]:.6g})")
        y0 = np.real(V[:, k])
        y0 /= np.linalg.norm(y0)
        return y0 if y0[np.argmax(np.abs(y0))] > 0 else -y0

    @staticmethod
    def incomplete_geodesic(alg: LieAlgebra, x0: Vec) -> IncompleteGeodesic:
        x0 = np.asarray(x0, dtype=np.float64)
        return IncompleteGeodesic(x0=x0, ad=AlgebraService.ad_matrix(alg, x0))

    # ==================== INVARIANT FORMS ====================

    @staticmethod
    def _sym_basis(m: int) -> np.ndarray:
        """Frobenius-orthonormal basis of symmetric m×m matrices."""
        basis = []
        for i in range(m):
            for j in range(i, m):
                E = np.zeros((m, m))
                if i == j:
                    E[i, i] = 1.0
                else:
                    E[i, j] = E[j, i] = 1.0 / np.sqrt(2.0)
                basis.append(E)
        return np.array(basis)

    @staticmethod
    def _ascend(basis: np.ndarray, c: np.ndarray, iterations: int = 500) -> tuple[np.ndarray, float]:
        """Projected ascent of λmin(Σ c_k S_k) on the unit sphere; only improvements are accepted."""
        def lam_min(coeffs):
            w, V = np.linalg.eigh(np.einsum("k,kab->ab", coeffs, basis))
            return w[0], V[:, 0]

        c = c / np.linalg.norm(c)
        value, v = lam_min(c)
        step = 0.5
        for _ in range(iterations):
            grad = np.einsum("a,kab,b->k", v, basis, v)
            grad -= (grad @ c) * c
            if np.linalg.norm(grad) < 1e-14:
                break
            candidate = c + step * grad
            candidate /= np.linalg.norm(candidate)
            new_value, new_v = lam_min(candidate)
            if new_value > value:
                c, value, v = candidate, new_value, new_v
                step = min(step * 1.5, 1.0)
            else:
                step *= 0.5
                if step < 1e-12:
                    break
        return c, value

    @staticmethod
    def invariant_pd_form(
        rep_mats: Sequence[np.ndarray],
        tol: float = 1e-9,
        restarts: int | None = None,
        seed: int | None = None,
        m: int | None = None,
    ) -> np.ndarray | None:
        """
        Positive definite S with RᵀS + SR = 0 for every R, rescaled to trace m;
        None when no such form is found. An empty list needs m and gives I.
        """
        restarts = config.PD_FORM_RESTARTS if restarts is None else restarts
        seed = config.SEED if seed is None else seed
        mats = [np.asarray(R, dtype=np.float64) for R in rep_mats]
        if not mats:
            if m is None:
                raise SpecValidationError("invariant_pd_form needs m when the representation is empty")
            return np.eye(m)
        m = mats[0].shape[0]
        if any(R.shape != (m, m) for R in mats):
            raise SpecValidationError(f"Representation matrices must all be {m}x{m}")
        sym = GrowthService._sym_basis(m)

        constraints = np.array([
            np.concatenate([(R.T @ S + S @ R).ravel() for R in mats]) for S in sym
        ]).T
        null = linalg.null_space(constraints)
        if null.shape[1] == 0:
            logger.debug("Only S = 0 is invariant")
            return None
        basis = np.einsum("kq,kab->qab", null, sym)

        # projection of the identity onto the invariant subspace
        starts = [np.einsum("qab,ab->q", basis, np.eye(m))]
        rng = np.random.default_rng(seed)
        starts += [rng.standard_normal(basis.shape[0]) for _ in range(restarts)]

        best_c, best_value = None, -np.inf
        for c0 in starts:
            if np.linalg.norm(c0) < 1e-14:
                continue
            c, value = GrowthService._ascend(basis, c0)
            if value > best_value:
                best_c, best_value = c, value

        if best_value <= tol:
            logger.debug(f"Best invariant form has λmin={best_value:.3e}; none positive definite")
            return None
        S = np.einsum("q,qab->ab", best_c, basis)
        S = 0.5 * (S + S.T)
        return S * (m / np.trace(S))

    # ==================== PRIMARY BOUNDS ====================

    @staticmethod
    def primary_bound_check(family: str, params: dict[str, float] | None = None) -> PrimaryBound:
        """Whether ∫^∞ dr/φ(r) diverges for φ in the given family."""
        params = params or {}
        if any(v < 0 for v in params.values()):
            raise DomainError(f"Primary bound parameters must be non-negative, got {params}")
        match family:
            case "affine":
                if params.get("a", 1.0) + params.get("b", 1.0) <= 0:
                    raise DomainError("Affine bound a + b r must not vanish identically")
                return "PrimarilyComplete"
            case "rlogr":
                return "PrimarilyComplete"
            case "power":
                if "q" not in params or params["q"] <= 0:
                    raise DomainError("Power bound r^q needs a positive exponent q")
                return "PrimarilyComplete" if params["q"] <= 1.0 else "NotPrimarilyComplete"
            case _:
                raise DomainError(f"Unknown primary bound family '{family}' (use affine, rlogr or power)")
