import logging
from typing import Any, Sequence

import numpy as np
from scipy import linalg
from scipy.integrate import simpson

from app.core.exceptions import DegenerateMetricError, NumericalFailure, SpecValidationError
from app.core.models.algebra import Mat, Vec
from app.core.models.clairaut import (
    BiLipschitzReport, CurveLength, FactoredField, MetricField, SampledCurve,
)
from app.core.models.metric import MetricForm, WickFrame
from app.core.setting import config

logger = logging.getLogger(__name__)


class ClairautService:
    """
    Clairaut metric h = Σ (ω^i)^2 and its measurements.

    Handles:
    - h at a point represented by Ad_{p^{-1}} (body frame)
    - Spectrum of h relative to the Wick-rotated g̃
    - Curve lengths under any metric field
    - Sampled bi-Lipschitz comparisons between fields
    """

    @staticmethod
    def _check_invertible(Ainv: Mat) -> None:
        if not np.all(np.isfinite(Ainv)) or np.linalg.det(Ainv) == 0.0:
            raise DegenerateMetricError("Ad_{p^-1} matrix is singular")

    @staticmethod
    def clairaut_charges(A: Mat, metric: MetricForm, x: Vec, basis: Mat | None = None) -> Vec:
        """ω^i(p.x) = g_1(Ad_{p^{-1}} e_i, x) for the columns e_i of basis (default: standard)."""
        E = np.eye(metric.dim) if basis is None else basis
        return (A @ E).T @ (metric.G @ x)

    @staticmethod
    def clairaut_form_from_basis(Ainv: Mat, metric: MetricForm, basis: Mat) -> Mat:
        """Body-frame matrix of Σ_i g_1(Ainv e_i, ·) g_1(Ainv e_i, ·)."""
        ClairautService._check_invertible(Ainv)
        W = metric.G @ Ainv @ basis
        H = W @ W.T
        return 0.5 * (H + H.T)

    @staticmethod
    def clairaut_form_at(Ainv: Mat, metric: MetricForm, frame: WickFrame) -> Mat:
        """
        h_p(p.u, p.v) = g̃_1(Ainv* ψu, Ainv* ψv), with * the g̃-adjoint.

        Independent of the orthonormal frame up to block-orthogonal changes.
        """
        ClairautService._check_invertible(Ainv)
        gT = frame.gTilde
        Ainv_star = np.linalg.solve(gT, Ainv.T @ gT)
        T = Ainv_star @ frame.psi
        H = T.T @ gT @ T
        return 0.5 * (H + H.T)

    @staticmethod
    def clairaut_factor_at(Ainv: Mat, metric: MetricForm, frame: WickFrame) -> Mat:
        """Body-frame W with clairaut_form_at = W^T W."""
        ClairautService._check_invertible(Ainv)
        gT = frame.gTilde
        Ainv_star = np.linalg.solve(gT, Ainv.T @ gT)
        return np.linalg.cholesky(gT).T @ Ainv_star @ frame.psi

    @staticmethod
    def clairaut_spectrum(H: Mat, gTilde: Mat) -> tuple[float, float]:
        """Min and max generalized eigenvalues of H relative to gTilde."""
        try:
            w = linalg.eigh(H, gTilde, eigvals_only=True)
        except linalg.LinAlgError as e:
            raise DegenerateMetricError(f"Reference form is not positive definite: {e}") from e
        return float(w[0]), float(w[-1])

    @staticmethod
    def _speeds(field: MetricField, curve: SampledCurve, grid: np.ndarray) -> np.ndarray:
        points = [curve.point(t) for t in grid]
        if curve.tangent is not None:
            tangents = np.array([curve.tangent(t) for t in grid], dtype=np.float64)
        else:
            tangents = np.gradient(np.array(points, dtype=np.float64), grid, axis=0, edge_order=2)

        speeds = np.empty(len(grid))
        for k, (p, v) in enumerate(zip(points, tangents)):
            if isinstance(field, FactoredField):
                W = field.factor(p)
                if not np.all(np.isfinite(W)) or np.linalg.det(W) == 0.0:
                    raise NumericalFailure(f"Metric factor is singular at parameter {grid[k]:.6g}")
                speeds[k] = float(np.linalg.norm(W @ v))
                continue
            H = field(p)
            if np.linalg.eigvalsh(H)[0] <= 0.0:
                raise NumericalFailure(f"Metric field is not positive definite at parameter {grid[k]:.6g}")
            speeds[k] = np.sqrt(max(float(v @ H @ v), 0.0))
        return speeds

    @staticmethod
    def _tail(grid: np.ndarray, speeds: np.ndarray, params: np.ndarray):
        """
        Geometric extrapolation of the last two parameter segments.
        Only meaningful on uniform or geometric grids with a monotone decreasing speed.
        """
        per = (len(grid) - 1) // (len(params) - 1)
        last = speeds[-(per + 1):]
        if np.any(np.diff(speeds[-(2 * per + 1):]) > 0):
            return None, "non-monotone"
        prev = simpson(speeds[-(2 * per + 1):-per], x=grid[-(2 * per + 1):-per])
        tail_seg = simpson(last, x=grid[-(per + 1):])
        if prev <= 0.0:
            return None, "non-monotone"
        ratio = tail_seg / prev
        if ratio >= 1.0 - 1e-6:
            return float("inf"), "divergent"
        return float(tail_seg * ratio / (1.0 - ratio)), "monotone"

    @staticmethod
    def curve_length(
        field: MetricField,
        curve: SampledCurve,
        rtol: float | None = None,
        max_doublings: int | None = None,
    ) -> CurveLength:
        """
        Composite Simpson quadrature of sqrt(h(γ', γ')) on the curve grid,
        doubled by midpoint insertion until the relative change is <= rtol.
        """
        rtol = config.QUAD_RTOL if rtol is None else rtol
        max_doublings = config.QUAD_MAX_DOUBLINGS if max_doublings is None else max_doublings

        grid = curve.params
        previous = None
        converged = False
        for k in range(max_doublings + 1):
            speeds = ClairautService._speeds(field, curve, grid)
            value = float(simpson(speeds, x=grid))
            if previous is not None and abs(value - previous) <= rtol * max(abs(value), 1e-300):
                converged = True
                break
            previous = value
            if k < max_doublings:
                mids = 0.5 * (grid[:-1] + grid[1:])
                grid = np.insert(grid, np.arange(1, len(grid)), mids)

        if not converged:
            logger.warning(f"Curve length for '{curve.name}' did not converge after {max_doublings} doublings")
        tail, flag = ClairautService._tail(grid, speeds, curve.params)
        if flag == "non-monotone":
            logger.warning(f"Tail of '{curve.name}' is not monotone decreasing; no tail estimate")
        logger.debug(f"Length of '{curve.name}': {value:.12g} ({len(grid)} samples, tail {tail}, {flag})")
        return CurveLength(
            length=value, refinements=k, samples=len(grid), converged=converged,
            tail_estimate=tail, tail_flag=flag,
        )

    @staticmethod
    def bi_lipschitz_probe(
        field_a: MetricField,
        field_b: MetricField,
        points: Sequence[Any],
        directions: Sequence[np.ndarray],
        ray: bool = False,
    ) -> BiLipschitzReport:
        """
        Ratios field_a(v,v) / field_b(v,v) at the samples. When the samples lie
        along a declared ray, a monotone ratio sequence spanning at least two
        decades is flagged divergent.
        """
        ratios = []
        for p, v in zip(points, directions):
            v = np.asarray(v, dtype=np.float64)
            if not np.any(v):
                raise SpecValidationError("comparison directions must be nonzero")
            ratios.append(float(v @ field_a(p) @ v) / float(v @ field_b(p) @ v))
        ratios = np.array(ratios)

        trend = "none"
        if ray and len(ratios) >= 2:
            steps = np.diff(ratios)
            monotone = bool(np.all(steps >= 0) or np.all(steps <= 0))
            if monotone and ratios.max() >= 100.0 * ratios.min():
                trend = "divergent"
        return BiLipschitzReport(
            ratio_min=float(ratios.min()), ratio_max=float(ratios.max()), trend=trend, ratios=ratios,
        )
