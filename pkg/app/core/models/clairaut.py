from dataclasses import dataclass
from typing import Any, Callable, Literal

import numpy as np

# point descriptor -> symmetric positive definite matrix
MetricField = Callable[[Any], np.ndarray]

TailFlag = Literal["monotone", "non-monotone", "divergent"]


@dataclass(frozen=True, eq=False)
class FactoredField:
    """
    Metric field stored as a factor W(p) with h_p = W^T W.

    Speeds are taken as |W v|, which keeps tiny lengths accurate where v^T H v
    would cancel.
    """
    factor: Callable[[Any], np.ndarray]

    def __call__(self, point) -> np.ndarray:
        W = self.factor(point)
        H = W.T @ W
        return 0.5 * (H + H.T)


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """
    Curve given on a strictly increasing parameter grid.

    point(t) returns the descriptor the metric field understands; tangent(t)
    returns the velocity in the same coordinates. Without a tangent the
    velocity is finite-differenced from point(t), which must then be an array.
    """
    params: np.ndarray
    point: Callable[[float], Any]
    tangent: Callable[[float], np.ndarray] | None = None
    name: str = ""

    def __post_init__(self):
        params = np.asarray(self.params, dtype=np.float64)
        if params.ndim != 1 or params.size < 3 or np.any(np.diff(params) <= 0):
            raise ValueError("Curve parameters must be a strictly increasing grid of at least 3 samples")
        object.__setattr__(self, "params", params)


@dataclass(frozen=True)
class CurveLength:
    length: float
    refinements: int
    samples: int
    converged: bool
    tail_estimate: float | None
    tail_flag: TailFlag


@dataclass(frozen=True, eq=False)
class BiLipschitzReport:
    ratio_min: float
    ratio_max: float
    trend: Literal["divergent", "none"]
    ratios: np.ndarray
