from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import expm

from app.core.models.algebra import LieAlgebra
from app.core.models.flow import Blowup, TrajectoryStatus


@dataclass(frozen=True)
class Bounded:
    kind: Literal["Bounded"] = "Bounded"


@dataclass(frozen=True)
class Linear:
    kind: Literal["Linear"] = "Linear"


@dataclass(frozen=True)
class Polynomial:
    degree: int
    kind: Literal["Polynomial"] = "Polynomial"


@dataclass(frozen=True)
class Exponential:
    rate: float
    kind: Literal["Exponential"] = "Exponential"


@dataclass(frozen=True)
class UndeterminedFit:
    reason: str = ""
    kind: Literal["Undetermined"] = "Undetermined"


GrowthFit = Bounded | Linear | Polynomial | Exponential | UndeterminedFit


@dataclass(frozen=True, eq=False)
class GrowthReport:
    """‖Ad_{exp(ta)}‖ w.r.t. g̃ sampled on a positive grid, plus the fitted class."""
    direction: np.ndarray
    times: np.ndarray
    norms: np.ndarray
    fit: GrowthFit | None = None
    residual: float | None = None
    truncated: bool = False


PrimaryBound = Literal["PrimarilyComplete", "NotPrimarilyComplete"]

Certificate = Literal[
    "definite", "bi-invariant", "abelian", "2-step-nilpotent",
    "compact-type", "direct-product", "pseudo-compact-semidirect",
]

VerdictKind = Literal["CompleteCertified", "IncompleteCertified", "NumericallyIncomplete", "Undetermined"]


@dataclass(frozen=True, eq=False)
class IncompleteGeodesic:
    """
    Closed-form geodesic γ(t) = exp(−ln(1−t) x0) generated by an idempotent x0,
    defined on t < 1.
    """
    x0: np.ndarray
    ad: np.ndarray
    t_star: float = 1.0

    def velocity(self, t: float) -> np.ndarray:
        if t >= self.t_star:
            raise ValueError(f"Geodesic is only defined for t < {self.t_star}")
        return self.x0 / (1.0 - t)

    def adjoint_inverse(self, t: float) -> np.ndarray:
        """A(t) = Ad_{γ(t)^{-1}} = exp(ln(1−t) ad_{x0})."""
        if t >= self.t_star:
            raise ValueError(f"Geodesic is only defined for t < {self.t_star}")
        return expm(np.log1p(-t) * self.ad)


@dataclass(frozen=True, eq=False)
class IdempotentWitness:
    x0: np.ndarray
    residual: float
    eigenvector: np.ndarray
    geodesic: IncompleteGeodesic
    kind: Literal["idempotent"] = "idempotent"


@dataclass(frozen=True, eq=False)
class BlowupWitness:
    x0: np.ndarray
    status: Blowup
    kind: Literal["blowup"] = "blowup"


@dataclass(frozen=True, eq=False)
class ProbeSummary:
    x0: np.ndarray
    status: TrajectoryStatus
    samples: int


@dataclass(frozen=True, eq=False)
class CompletenessVerdict:
    verdict: VerdictKind
    certificate: Certificate | None = None
    witness: IdempotentWitness | BlowupWitness | None = None
    growth_reports: list[GrowthReport] = field(default_factory=list)
    probes: list[ProbeSummary] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class SemidirectDeclaration:
    """User-declared decomposition K ⋉_ρ R^m; rep holds one m×m matrix per K basis vector."""
    k_algebra: LieAlgebra
    rep: np.ndarray
    m: int


