from app.core.schemas.reports import ReproCheckDoc, ReproReport
from app.modules.catalog import run_aff_reproduction

NAME = "repro-aff"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Reproduce every closed-form aff(R) check, pass/fail each")
    parser.add_argument("--seed", type=int, default=None, help="Seed for the random sample points")
    parser.set_defaults(handler=run)


def run(args) -> tuple[ReproReport, int]:
    checks = run_aff_reproduction(seed=args.seed)
    docs = [ReproCheckDoc(name=c.name, expected=c.expected, observed=c.observed, passed=c.passed) for c in checks]
    failed = sum(not c.passed for c in checks)
    return ReproReport(passed=len(checks) - failed, failed=failed, checks=docs), 3 if failed else 0
