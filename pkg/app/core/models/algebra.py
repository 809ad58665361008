from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt

# Coordinates of an algebra element in the algebra basis.
Vec = npt.NDArray[np.float64]
# Dense n x n matrix (linear map or bilinear form) in the algebra basis.
Mat = npt.NDArray[np.float64]


def frozen_array(values, ndim: int | None = None) -> np.ndarray:
    """Copy into a read-only float64 array."""
    arr = np.array(values, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """
    Finite-dimensional real Lie algebra given by structure constants.

    structure[i, j, k] is the e_k component of [e_i, e_j].
    Labels are cosmetic; every operation is index-based.
    """
    dim: int
    structure: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "structure", frozen_array(self.structure))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(self.dim)))

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.structure), initial=0.0))

    @property
    def is_abelian(self) -> bool:
        return self.scale == 0.0


@dataclass(frozen=True)
class Violation:
    kind: Literal["antisymmetry", "jacobi"]
    indices: tuple[int, ...]
    magnitude: float


@dataclass(frozen=True)
class AlgebraValidation:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class NilpotencyResult:
    """step is None when the lower central series stabilises at a nonzero space."""
    step: int | None
    series_dims: tuple[int, ...] = field(default=())
    ambiguous: bool = False

    @property
    def nilpotent(self) -> bool:
        return self.step is not None
