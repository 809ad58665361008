from dataclasses import dataclass, field, replace
from typing import Iterator, Literal, NamedTuple

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from app.core.setting import config


@dataclass(frozen=True)
class IntegrationOptions:
    rtol: float = field(default_factory=lambda: config.RTOL)
    atol: float = field(default_factory=lambda: config.ATOL)
    max_step: float = field(default_factory=lambda: config.MAX_STEP)
    blowup_norm_threshold: float = field(default_factory=lambda: config.BLOWUP_NORM_THRESHOLD)
    blowup_step_floor: float = field(default_factory=lambda: config.BLOWUP_STEP_FLOOR)
    blowup_bracket_tol: float = field(default_factory=lambda: config.BLOWUP_BRACKET_TOL)
    max_steps: int = 1_000_000

    def with_overrides(self, **overrides) -> "IntegrationOptions":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True)
class Completed:
    t_end: float
    kind: Literal["Completed"] = "Completed"


@dataclass(frozen=True)
class Blowup:
    """
    Bracket [t_low, t_high] around a finite-time blowup.

    t_low is the last time the solver accepted. t_high is the end of the watch
    window opened when ‖x‖ first crossed the threshold (crossing time plus the
    bracket tolerance, capped at t_max); the solver never reached it.
    """
    t_low: float
    t_high: float
    kind: Literal["Blowup"] = "Blowup"

    @property
    def width(self) -> float:
        return self.t_high - self.t_low

    def contains(self, t: float) -> bool:
        return self.t_low <= t <= self.t_high


@dataclass(frozen=True)
class ToleranceFailure:
    t_last: float
    reason: str = ""
    kind: Literal["ToleranceFailure"] = "ToleranceFailure"


TrajectoryStatus = Completed | Blowup | ToleranceFailure


class TrajectorySample(NamedTuple):
    t: float
    x: np.ndarray
    A: np.ndarray
    energy: float
    charges: np.ndarray
    step: float


@dataclass(frozen=True, eq=False)
class GeodesicTrajectory:
    """
    Time-sampled Euler-Arnold solution with adjoint transport A(t) = Ad_{γ(t)^{-1}}.

    One sample per accepted step (the initial state has step 0). xdots holds
    the right-hand side at each sample and feeds the cubic Hermite dense output.
    """
    times: np.ndarray
    xs: np.ndarray
    As: np.ndarray
    xdots: np.ndarray
    energies: np.ndarray
    charges: np.ndarray
    steps: np.ndarray
    status: TrajectoryStatus
    options: IntegrationOptions

    @property
    def dim(self) -> int:
        return self.xs.shape[1]

    def __len__(self) -> int:
        return len(self.times)

    @property
    def samples(self) -> Iterator[TrajectorySample]:
        for k in range(len(self.times)):
            yield TrajectorySample(
                float(self.times[k]), self.xs[k], self.As[k],
                float(self.energies[k]), self.charges[k], float(self.steps[k]),
            )

    @property
    def final(self) -> TrajectorySample:
        k = len(self.times) - 1
        return TrajectorySample(
            float(self.times[k]), self.xs[k], self.As[k],
            float(self.energies[k]), self.charges[k], float(self.steps[k]),
        )

    def interpolate(self, t) -> np.ndarray:
        """Body velocity x(t) at arbitrary times inside the sampled range."""
        if len(self.times) < 2:
            raise ValueError("Dense output needs at least two samples")
        spline = CubicHermiteSpline(self.times, self.xs, self.xdots, axis=0, extrapolate=False)
        return spline(t)


@dataclass(frozen=True)
class ChargeDrift:
    energy: float
    charges: np.ndarray

    @property
    def max_charge(self) -> float:
        return float(np.max(self.charges, initial=0.0))
