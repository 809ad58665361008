from dataclasses import dataclass
from typing import Literal

import numpy as np

from app.core.models.algebra import frozen_array

AffOrbit = Literal["Definite", "LorentzE2NonIsotropic", "LorentzE2Isotropic"]


@dataclass(frozen=True, eq=False)
class MetricForm:
    """Symmetric nondegenerate bilinear form g_1 on the algebra, any signature."""
    G: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "G", frozen_array(self.G, ndim=2))

    @property
    def dim(self) -> int:
        return self.G.shape[0]

    def __call__(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(u @ self.G @ v)


@dataclass(frozen=True, eq=False)
class WickFrame:
    """
    Orthonormal frame of g_1 with its Riemannian companion.

    Columns of B are g_1-orthonormal with g_1(B_i, B_i) = eps_i, negatives first.
    gTilde makes the same columns orthonormal; psi maps B_i to eps_i B_i.
    """
    B: np.ndarray
    eps: np.ndarray
    psi: np.ndarray
    gTilde: np.ndarray

    def __post_init__(self):
        for name in ("B", "eps", "psi", "gTilde"):
            object.__setattr__(self, name, frozen_array(getattr(self, name)))

    @property
    def index(self) -> int:
        """Number of negative directions s."""
        return int(np.sum(self.eps < 0))

    @property
    def definite(self) -> bool:
        return bool(np.all(self.eps == self.eps[0]))
