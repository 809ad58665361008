from datetime import datetime
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field
from pydantic.alias_generators import to_camel

from app.shared.timezone import get_utc_now


class ReportModel(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)


class TimestampedReport(ReportModel):
    # excluded when comparing reports for determinism
    generated_at: datetime = Field(default_factory=get_utc_now)


class StatusDoc(ReportModel):
    kind: Literal["Completed", "Blowup", "ToleranceFailure"]
    t_end: Optional[float] = None
    t_low: Optional[float] = None
    t_high: Optional[float] = None
    t_last: Optional[float] = None
    reason: Optional[str] = None


class FitDoc(ReportModel):
    kind: Literal["Bounded", "Linear", "Polynomial", "Exponential", "Undetermined"]
    degree: Optional[int] = None
    rate: Optional[float] = None
    reason: Optional[str] = None


class GrowthReportDoc(ReportModel):
    direction: List[float]
    times: List[float]
    norms: List[float]
    fit: Optional[FitDoc] = None
    fit_residual: Optional[float] = None
    truncated: bool = False


class ViolationDoc(ReportModel):
    kind: Literal["antisymmetry", "jacobi"]
    indices: List[int]
    magnitude: float


class ValidationReport(TimestampedReport):
    ok: bool
    dim: int
    labels: List[str]
    violations: List[ViolationDoc] = Field(default_factory=list)
    nilpotency_step: Optional[int] = None
    lower_central_series: List[int] = Field(default_factory=list)
    killing_form: List[List[float]]
    signature: List[int]


class TrajectoryReport(TimestampedReport):
    x0: List[float]
    status: StatusDoc
    samples: int
    energy_drift: float
    charge_drift: List[float]
    final_t: float
    final_x: List[float]
    csv: Optional[str] = None


class ProbeDoc(ReportModel):
    x0: List[float]
    status: StatusDoc
    samples: int


class WitnessDoc(ReportModel):
    kind: Literal["idempotent", "blowup"]
    x0: List[float]
    residual: Optional[float] = None
    eigenvector: Optional[List[float]] = None
    blowup_time: Optional[float] = None
    status: Optional[StatusDoc] = None


class VerdictReport(TimestampedReport):
    verdict: Literal["CompleteCertified", "IncompleteCertified", "NumericallyIncomplete", "Undetermined"]
    certificate: Optional[str] = None
    witness: Optional[WitnessDoc] = None
    growth_reports: List[GrowthReportDoc] = Field(default_factory=list)
    probes: List[ProbeDoc] = Field(default_factory=list)


class IdempotentDoc(ReportModel):
    x0: List[float]
    residual: float
    self_product: float


class IdempotentReport(TimestampedReport):
    restarts: int
    seed: int
    idempotents: List[IdempotentDoc]


class CurveLengthDoc(ReportModel):
    length: float
    refinements: int
    samples: int
    converged: bool
    tail_estimate: Optional[float] = None
    tail_flag: Literal["monotone", "non-monotone", "divergent"]


class ClairautReport(TimestampedReport):
    curve: str
    points: int
    length: Optional[CurveLengthDoc] = None
    lam_min_sq: float
    lam_max_sq: float
    csv: Optional[str] = None


class ReproCheckDoc(ReportModel):
    name: str
    expected: str
    observed: str
    passed: bool


class ReproReport(TimestampedReport):
    passed: int
    failed: int
    checks: List[ReproCheckDoc]


class ErrorResponse(BaseModel):
    detail: str


class GrowthScanReport(TimestampedReport):
    report: GrowthReportDoc
