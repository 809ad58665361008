from app.cli.documents import growth_doc
from app.cli.spec import load_spec_file, parse_grid, parse_vector
from app.core.schemas.reports import GrowthScanReport
from app.modules.growth import GrowthService
from app.modules.metric import MetricService

NAME = "growth"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Scan and classify ‖Ad_exp(ta)‖ along a direction")
    parser.add_argument("spec", help="Path to the JSON analysis spec")
    parser.add_argument("--dir", required=True, help="Direction a as v1,..,vn")
    parser.add_argument("--tgrid", default=None, help="Grid as log:t0,t1,N")
    parser.set_defaults(handler=run)


def run(args) -> tuple[GrowthScanReport, int]:
    problem = load_spec_file(args.spec)
    direction = parse_vector(args.dir, problem.algebra.dim, "--dir")
    grid_text = args.tgrid or problem.spec.task.t_grid
    grid = parse_grid(grid_text) if grid_text else None
    frame = MetricService.signature_decompose(problem.metric)
    report = GrowthService.scan_and_classify(problem.algebra, direction, frame.gTilde, grid)
    return GrowthScanReport(report=growth_doc(report)), 0
