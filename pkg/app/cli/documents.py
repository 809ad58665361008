"""Conversion of numeric results into the pydantic report documents."""
import numpy as np

from app.core.models.flow import TrajectoryStatus
from app.core.models.growth import BlowupWitness, CompletenessVerdict, GrowthReport
from app.core.schemas.reports import (
    FitDoc, GrowthReportDoc, ProbeDoc, StatusDoc, VerdictReport, WitnessDoc,
)


def floats(values) -> list:
    return np.asarray(values, dtype=np.float64).tolist()


def status_doc(status: TrajectoryStatus) -> StatusDoc:
    match status.kind:
        case "Completed":
            return StatusDoc(kind="Completed", t_end=status.t_end)
        case "Blowup":
            return StatusDoc(kind="Blowup", t_low=status.t_low, t_high=status.t_high)
        case _:
            return StatusDoc(kind="ToleranceFailure", t_last=status.t_last, reason=status.reason)


def growth_doc(report: GrowthReport) -> GrowthReportDoc:
    fit = None
    if report.fit is not None:
        fit = FitDoc(
            kind=report.fit.kind,
            degree=getattr(report.fit, "degree", None),
            rate=getattr(report.fit, "rate", None),
            reason=getattr(report.fit, "reason", None),
        )
    return GrowthReportDoc(
        direction=floats(report.direction), times=floats(report.times), norms=floats(report.norms),
        fit=fit, fit_residual=report.residual, truncated=report.truncated,
    )


def verdict_doc(verdict: CompletenessVerdict) -> VerdictReport:
    witness = None
    if isinstance(verdict.witness, BlowupWitness):
        witness = WitnessDoc(kind="blowup", x0=floats(verdict.witness.x0), status=status_doc(verdict.witness.status))
    elif verdict.witness is not None:
        witness = WitnessDoc(
            kind="idempotent",
            x0=floats(verdict.witness.x0),
            residual=verdict.witness.residual,
            eigenvector=floats(verdict.witness.eigenvector),
            blowup_time=verdict.witness.geodesic.t_star,
        )
    return VerdictReport(
        verdict=verdict.verdict,
        certificate=verdict.certificate,
        witness=witness,
        growth_reports=[growth_doc(r) for r in verdict.growth_reports],
        probes=[ProbeDoc(x0=floats(p.x0), status=status_doc(p.status), samples=p.samples) for p in verdict.probes],
    )
