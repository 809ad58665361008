from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic.alias_generators import to_camel

from app.core.setting import config


class SpecModel(BaseModel):
    """camelCase on the wire, snake_case in code; unknown keys are rejected."""
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True, extra="forbid")


class BracketEntry(SpecModel):
    i: int = Field(..., ge=1, description="1-based index of the first basis vector")
    j: int = Field(..., ge=1, description="1-based index of the second basis vector, j > i")
    coeffs: List[float] = Field(..., description="Components of [e_i, e_j] in the basis")

    @model_validator(mode="after")
    def check_order(self):
        if self.i >= self.j:
            raise ValueError(f"bracket pairs must have i < j, got ({self.i}, {self.j})")
        return self


class InlineAlgebra(SpecModel):
    dim: int = Field(..., ge=1)
    brackets: List[BracketEntry] = Field(default_factory=list)
    labels: Optional[List[str]] = None

    @model_validator(mode="after")
    def check_dimensions(self):
        seen = set()
        for b in self.brackets:
            if b.j > self.dim:
                raise ValueError(f"bracket ({b.i}, {b.j}) exceeds dim {self.dim}")
            if len(b.coeffs) != self.dim:
                raise ValueError(f"bracket ({b.i}, {b.j}) needs {self.dim} coeffs, got {len(b.coeffs)}")
            if (b.i, b.j) in seen:
                raise ValueError(f"bracket ({b.i}, {b.j}) is given twice")
            seen.add((b.i, b.j))
        if self.labels is not None and len(self.labels) != self.dim:
            raise ValueError(f"labels must have {self.dim} entries")
        return self


class BuiltinAlgebra(SpecModel):
    builtin: str


class SemidirectSpec(SpecModel):
    k: Union[BuiltinAlgebra, InlineAlgebra]
    rep: List[List[List[float]]] = Field(..., description="One m x m matrix per basis vector of k")
    m: int = Field(..., ge=1)


class SemidirectAlgebra(SpecModel):
    semidirect: SemidirectSpec


class MatrixMetric(SpecModel):
    matrix: List[List[float]]


class PresetMetric(SpecModel):
    preset: str


class TaskParams(SpecModel):
    t_max: float = Field(default_factory=lambda: config.T_MAX, gt=0)
    rtol: float = Field(default_factory=lambda: config.RTOL, gt=0)
    atol: float = Field(default_factory=lambda: config.ATOL, gt=0)
    seed: int = Field(default_factory=lambda: config.SEED, ge=0)
    restarts: int = Field(default_factory=lambda: config.NEWTON_RESTARTS, ge=1)
    probes: int = Field(default_factory=lambda: config.PROBES, ge=0)
    probe_t_max: float = Field(default_factory=lambda: config.PROBE_T_MAX, gt=0)
    t_grid: Optional[str] = Field(None, description="log:t0,t1,N")


class AnalysisSpec(SpecModel):
    algebra: Union[BuiltinAlgebra, InlineAlgebra, SemidirectAlgebra]
    metric: Union[MatrixMetric, PresetMetric]
    task: TaskParams = Field(default_factory=TaskParams)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "algebra": {"builtin": "aff"},
                "metric": {"preset": "g-1"},
                "task": {"tMax": 10.0, "seed": 0},
            }
        }
    )
