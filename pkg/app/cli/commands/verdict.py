from app.cli.documents import verdict_doc
from app.cli.spec import load_spec_file
from app.core.schemas.reports import VerdictReport
from app.modules.growth import VerdictService

NAME = "verdict"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Completeness verdict with certificate or witness")
    parser.add_argument("spec", help="Path to the JSON analysis spec")
    parser.add_argument("--probes", type=int, default=None, help="Geodesic probe ensemble size")
    parser.add_argument("--seed", type=int, default=None, help="Random seed for searches and probes")
    parser.set_defaults(handler=run)


def run(args) -> tuple[VerdictReport, int]:
    problem = load_spec_file(args.spec)
    task = problem.spec.task
    verdict = VerdictService.completeness_verdict(
        problem.algebra,
        problem.metric,
        declaration=problem.declaration,
        probes=task.probes if args.probes is None else args.probes,
        seed=task.seed if args.seed is None else args.seed,
        restarts=task.restarts,
        probe_t_max=task.probe_t_max,
    )
    return verdict_doc(verdict), 0
