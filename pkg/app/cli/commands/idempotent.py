from app.cli.documents import floats
from app.cli.spec import load_spec_file
from app.core.schemas.reports import IdempotentDoc, IdempotentReport
from app.modules.growth import GrowthService

NAME = "idempotent"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Search for idempotents ad†_x x = x")
    parser.add_argument("spec", help="Path to the JSON analysis spec")
    parser.add_argument("--restarts", type=int, default=None, help="Newton restarts")
    parser.add_argument("--seed", type=int, default=None, help="Random seed")
    parser.set_defaults(handler=run)


def run(args) -> tuple[IdempotentReport, int]:
    problem = load_spec_file(args.spec)
    task = problem.spec.task
    restarts = task.restarts if args.restarts is None else args.restarts
    seed = task.seed if args.seed is None else args.seed
    roots = GrowthService.idempotent_search(problem.algebra, problem.metric, restarts=restarts, seed=seed)
    docs = [
        IdempotentDoc(
            x0=floats(x0),
            residual=GrowthService.idempotent_residual(problem.algebra, problem.metric, x0),
            self_product=problem.metric(x0, x0),
        )
        for x0 in roots
    ]
    return IdempotentReport(restarts=restarts, seed=seed, idempotents=docs), 0
