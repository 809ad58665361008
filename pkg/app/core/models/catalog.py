from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from app.core.exceptions import DomainError
from app.core.models.algebra import LieAlgebra
from app.core.models.clairaut import SampledCurve
from app.core.models.growth import SemidirectDeclaration
from app.core.models.metric import MetricForm


class AffChart:
    """
    Global chart (x, y), x > 0, of Aff+(R) realised as [[x, y], [0, 1]].
    Left-invariant fields are X1 = x∂x and X2 = x∂y.
    """

    @staticmethod
    def _check(x: float) -> None:
        if not x > 0:
            raise DomainError(f"aff chart needs x > 0, got x={x}")

    @staticmethod
    def ad(x: float, y: float) -> np.ndarray:
        AffChart._check(x)
        return np.array([[1.0, 0.0], [-y, x]])

    @staticmethod
    def ad_inv(x: float, y: float) -> np.ndarray:
        """Ad_{p^{-1}} for p = (x, y)."""
        AffChart._check(x)
        return np.array([[1.0, 0.0], [y / x, 1.0 / x]])

    @staticmethod
    def frame(x: float, y: float) -> np.ndarray:
        """Coordinate components of p.e1, p.e2 as columns."""
        AffChart._check(x)
        return np.diag([x, x])

    @staticmethod
    def to_coordinate(H_body: np.ndarray, x: float, y: float) -> np.ndarray:
        F_inv = np.linalg.inv(AffChart.frame(x, y))
        return F_inv.T @ H_body @ F_inv

    @staticmethod
    def body_velocity(point: np.ndarray, tangent: np.ndarray) -> np.ndarray:
        x, y = point
        AffChart._check(x)
        return np.asarray(tangent, dtype=np.float64) / x


@dataclass(frozen=True, eq=False)
class BuiltinEntry:
    name: str
    algebra: LieAlgebra
    presets: dict[str, MetricForm] = field(default_factory=dict)
    chart: type[AffChart] | None = None
    declaration: SemidirectDeclaration | None = None


@dataclass(frozen=True, eq=False)
class WitnessCurve:
    """Parameterised curve in the aff chart with exact tangent and a default grid."""
    name: str
    point: Callable[[float], np.ndarray]
    tangent: Callable[[float], np.ndarray]
    params: np.ndarray
    metric: str
    description: str = ""

    def sampled(self, params=None) -> SampledCurve:
        return SampledCurve(
            params=self.params if params is None else params,
            point=self.point, tangent=self.tangent, name=self.name,
        )


@dataclass(frozen=True)
class ReproCheck:
    name: str
    expected: str
    observed: str
    passed: bool
