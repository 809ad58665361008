import numpy as np

from app.cli.documents import floats
from app.cli.spec import load_spec_file
from app.core.schemas.reports import ValidationReport, ViolationDoc
from app.modules.algebra import AlgebraService
from app.modules.metric import MetricService

NAME = "validate"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Check a spec: algebra identities, nilpotency, Killing form, signature")
    parser.add_argument("spec", help="Path to the JSON analysis spec")
    parser.set_defaults(handler=run)


def run(args) -> tuple[ValidationReport, int]:
    problem = load_spec_file(args.spec)
    alg = problem.algebra
    validation = AlgebraService.validate_algebra(alg)
    nilpotency = AlgebraService.nilpotency_step(alg)
    frame = MetricService.signature_decompose(problem.metric)
    report = ValidationReport(
        ok=validation.ok,
        dim=alg.dim,
        labels=list(alg.labels),
        violations=[
            ViolationDoc(kind=v.kind, indices=list(v.indices), magnitude=v.magnitude)
            for v in validation.violations
        ],
        nilpotency_step=nilpotency.step,
        lower_central_series=list(nilpotency.series_dims),
        killing_form=floats(AlgebraService.killing_form(alg)),
        signature=[int(np.sum(frame.eps < 0)), int(np.sum(frame.eps > 0))],
    )
    return report, 0 if validation.ok else 2
