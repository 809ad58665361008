import logging
from functools import lru_cache

import numpy as np

from app.core.exceptions import DomainError, SpecValidationError
from app.core.models.algebra import LieAlgebra
from app.core.models.catalog import AffChart, BuiltinEntry, WitnessCurve
from app.core.models.clairaut import FactoredField, MetricField
from app.core.models.growth import SemidirectDeclaration
from app.core.models.metric import AffOrbit, MetricForm
from app.modules.algebra import AlgebraService
from app.modules.clairaut import ClairautService
from app.modules.metric import MetricService

logger = logging.getLogger(__name__)

BUILTIN_NAMES = ("abelian:n", "aff", "heis3", "n4", "so3", "sl2", "e2")

ROTATION = np.array([[0.0, -1.0], [1.0, 0.0]])

AFF_PRESETS = {
    "g1": np.eye(2),
    "g-1": np.diag([1.0, -1.0]),
    "g0": np.array([[0.0, 1.0], [1.0, 0.0]]),
}

AFF_ORBIT_REPRESENTATIVES: dict[str, np.ndarray] = {
    "Definite": AFF_PRESETS["g1"],
    "LorentzE2NonIsotropic": AFF_PRESETS["g-1"],
    "LorentzE2Isotropic": AFF_PRESETS["g0"],
}


class CatalogService:
    """
    Built-in algebras, metric presets and the closed-form aff(R) references.
    """

    @staticmethod
    def available() -> tuple[str, ...]:
        return BUILTIN_NAMES

    @staticmethod
    def load_builtin(name: str) -> BuiltinEntry:
        return _load(name)

    @staticmethod
    def preset(entry: BuiltinEntry, name: str) -> MetricForm:
        try:
            return entry.presets[name]
        except KeyError:
            raise SpecValidationError(
                f"Unknown preset '{name}' for '{entry.name}'; available: {', '.join(entry.presets)}"
            ) from None

    # ==================== aff(R) REFERENCES ====================

    @staticmethod
    def aff_reference(x: float, y: float, eps: int) -> tuple[np.ndarray, float, tuple[float, float]]:
        """
        Coordinate-frame Clairaut metric of g^(eps) = diag(1, eps):
        (1/x^4)[[x^2, eps x y], [eps x y, 1 + y^2]], its determinant and eigenvalues.
        """
        if not x > 0:
            raise DomainError(f"aff reference needs x > 0, got x={x}")
        if eps not in (-1, 1):
            raise DomainError(f"eps must be +1 or -1, got {eps}")
        H = np.array([[x * x, eps * x * y], [eps * x * y, 1.0 + y * y]]) / x ** 4
        det = eps ** 2 / x ** 6
        s = x * x + eps ** 2 * (1.0 + y * y)
        root = np.sqrt(s * s - 4.0 * eps ** 2 * x * x)
        # smaller root via the product to avoid cancellation
        lam_max = (s + root) / (2.0 * x ** 4)
        lam_min = det / lam_max
        return H, det, (lam_min, lam_max)

    @staticmethod
    def aff_clairaut_field(metric: MetricForm) -> MetricField:
        """Coordinate-frame Clairaut metric of a left-invariant metric on aff, as a field on (x, y)."""
        frame = MetricService.signature_decompose(metric)

        def factor(point):
            x, y = point
            W = ClairautService.clairaut_factor_at(AffChart.ad_inv(x, y), metric, frame)
            return W @ np.linalg.inv(AffChart.frame(x, y))

        return FactoredField(factor)

    @staticmethod
    def aff_eigendirection_field(x: float, y: float, eps: int) -> np.ndarray:
        """Kernel V = (−eps y, x) of the rank-one part of h^(eps)."""
        AffChart._check(x)
        return np.array([-eps * y, x], dtype=np.float64)

    @staticmethod
    def aff_automorphism(alpha: float, beta: float) -> np.ndarray:
        if beta == 0:
            raise DomainError("aff automorphism needs beta != 0")
        return np.array([[1.0, 0.0], [alpha, beta]])

    @staticmethod
    def aff_orbit_representative(kind: AffOrbit) -> np.ndarray:
        try:
            return AFF_ORBIT_REPRESENTATIVES[kind].copy()
        except KeyError:
            raise DomainError(
                f"Unknown aff orbit '{kind}'; available: {', '.join(AFF_ORBIT_REPRESENTATIVES)}"
            ) from None

    @staticmethod
    def aff_witness_curves() -> dict[str, WitnessCurve]:
        curves = [
            WitnessCurve(
                name="g-1-geodesic",
                point=lambda t: np.array([1.0 / (1.0 - t), 1.0 / (1.0 - t)]),
                tangent=lambda t: np.array([1.0 / (1.0 - t) ** 2, 1.0 / (1.0 - t) ** 2]),
                params=np.linspace(0.0, 0.9, 91),
                metric="g-1",
                description="incomplete geodesic of g^(-1), body velocity (e1 + e2)/(1 - t)",
            ),
            WitnessCurve(
                name="h-1-diverging",
                point=lambda t: np.array([np.cosh(t), np.sinh(t)]),
                tangent=lambda t: np.array([np.sinh(t), np.cosh(t)]),
                params=np.linspace(0.0, 40.0, 401),
                metric="g-1",
                description="diverging integral curve of V with finite h^(-1) length",
            ),
            WitnessCurve(
                name="h0-ray",
                point=lambda t: np.array([t, 0.0]),
                tangent=lambda t: np.array([1.0, 0.0]),
                params=np.geomspace(1.0, 1e6, 121),
                metric="g0",
                description="diverging ray (t, 0) with finite h^(0) length",
            ),
            WitnessCurve(
                name="g0-geodesic",
                point=lambda t: np.array([1.0 / (1.0 - t), 0.0]),
                tangent=lambda t: np.array([1.0 / (1.0 - t) ** 2, 0.0]),
                params=np.linspace(0.0, 0.9, 91),
                metric="g0",
                description="incomplete geodesic of g^(0), body velocity e1/(1 - t)",
            ),
        ]
        return {c.name: c for c in curves}


@lru_cache(maxsize=None)
def _load(name: str) -> BuiltinEntry:
    def euclidean(n: int) -> dict[str, MetricForm]:
        return {"euclidean": MetricService.make_metric(np.eye(n))}

    if name.startswith("abelian:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            n = 0
        if n < 1:
            raise SpecValidationError(f"'{name}' needs a positive dimension, e.g. 'abelian:3'")
        alg = LieAlgebra(dim=n, structure=np.zeros((n, n, n)))
        return BuiltinEntry(name=name, algebra=alg, presets=euclidean(n))

    match name:
        case "aff":
            alg = AlgebraService.from_brackets(2, [(1, 2, [0, 1])])
            presets = {k: MetricService.make_metric(G) for k, G in AFF_PRESETS.items()}
            return BuiltinEntry(name=name, algebra=alg, presets=presets, chart=AffChart)
        case "heis3":
            alg = AlgebraService.from_brackets(3, [(1, 2, [0, 0, 1])])
            presets = euclidean(3) | {"lorentz": MetricService.make_metric(np.diag([-1.0, 1.0, 1.0]))}
            return BuiltinEntry(name=name, algebra=alg, presets=presets)
        case "n4":
            alg = AlgebraService.from_brackets(4, [(1, 2, [0, 0, 1, 0]), (1, 3, [0, 0, 0, 1])])
            return BuiltinEntry(name=name, algebra=alg, presets=euclidean(4))
        case "so3":
            alg = AlgebraService.from_brackets(3, [(1, 2, [0, 0, 1]), (1, 3, [0, -1, 0]), (2, 3, [1, 0, 0])])
            presets = euclidean(3) | {
                "minus-killing": MetricService.make_metric(-AlgebraService.killing_form(alg)),
            }
            return BuiltinEntry(name=name, algebra=alg, presets=presets)
        case "sl2":
            alg = AlgebraService.from_brackets(3, [(1, 2, [0, 2, 0]), (1, 3, [0, 0, -2]), (2, 3, [1, 0, 0])], ("h", "e", "f"))
            presets = euclidean(3) | {"killing": MetricService.make_metric(AlgebraService.killing_form(alg))}
            return BuiltinEntry(name=name, algebra=alg, presets=presets)
        case "e2":
            k_alg = LieAlgebra(dim=1, structure=np.zeros((1, 1, 1)), labels=("u",))
            rep = ROTATION[None, :, :]
            alg = AlgebraService.semidirect_product(k_alg, rep, 2, labels=("u", "w1", "w2"))
            return BuiltinEntry(
                name=name, algebra=alg, presets=euclidean(3),
                declaration=SemidirectDeclaration(k_algebra=k_alg, rep=rep, m=2),
            )
        case _:
            raise SpecValidationError(f"Unknown builtin '{name}'; available: {', '.join(BUILTIN_NAMES)}")
