from app.cli.documents import floats, status_doc
from app.cli.spec import load_spec_file, parse_vector
from app.core.models.flow import IntegrationOptions
from app.core.schemas.reports import TrajectoryReport
from app.modules.flow import GeodesicIntegrator, export_trajectory_csv

NAME = "geodesic"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Integrate the Euler-Arnold flow from x0")
    parser.add_argument("spec", help="Path to the JSON analysis spec")
    parser.add_argument("--x0", required=True, help="Initial body velocity v1,..,vn")
    parser.add_argument("--tmax", type=float, default=None, help="Integration horizon")
    parser.add_argument("--csv", default=None, help="Write the trajectory CSV here")
    parser.set_defaults(handler=run)


def run(args) -> tuple[TrajectoryReport, int]:
    problem = load_spec_file(args.spec)
    task = problem.spec.task
    x0 = parse_vector(args.x0, problem.algebra.dim, "--x0")
    opts = IntegrationOptions().with_overrides(rtol=task.rtol, atol=task.atol)
    traj = GeodesicIntegrator.integrate_geodesic(
        problem.algebra, problem.metric, x0,
        t_max=task.t_max if args.tmax is None else args.tmax, opts=opts,
    )
    if args.csv:
        export_trajectory_csv(traj, args.csv)

    drift = GeodesicIntegrator.charge_drift(traj) if len(traj) >= 2 else None
    final = traj.final
    report = TrajectoryReport(
        x0=floats(x0),
        status=status_doc(traj.status),
        samples=len(traj),
        energy_drift=drift.energy if drift else 0.0,
        charge_drift=floats(drift.charges) if drift else [0.0] * traj.dim,
        final_t=final.t,
        final_x=floats(final.x),
        csv=args.csv,
    )
    return report, 3 if traj.status.kind == "ToleranceFailure" else 0
