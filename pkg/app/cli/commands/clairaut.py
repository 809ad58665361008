import json
import logging

import numpy as np

from app.cli.spec import load_spec_file
from app.core.exceptions import SpecValidationError
from app.core.models.catalog import AffChart
from app.core.schemas.reports import ClairautReport, CurveLengthDoc
from app.modules.catalog import CatalogService
from app.modules.clairaut import ClairautService, export_spectrum_csv
from app.modules.metric import MetricService

logger = logging.getLogger(__name__)

NAME = "clairaut"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Clairaut metric spectrum and curve length")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--curve", help="Named aff witness curve")
    source.add_argument("--points", help="JSON file with a list of Ad_{p^-1} matrices")
    parser.add_argument("spec", help="Path to the JSON analysis spec")
    parser.add_argument("--csv", default=None, help="Write the spectrum CSV here")
    parser.set_defaults(handler=run)


def _load_points(path: str, dim: int) -> list[np.ndarray]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        mats = [np.array(m, dtype=np.float64) for m in raw]
    except (OSError, ValueError, TypeError) as e:
        raise SpecValidationError(f"--points: cannot read matrices from '{path}': {e}") from e
    if not mats or any(m.shape != (dim, dim) for m in mats):
        raise SpecValidationError(f"--points: expected a non-empty list of {dim}x{dim} matrices")
    return mats


def run(args) -> tuple[ClairautReport, int]:
    problem = load_spec_file(args.spec)
    metric = problem.metric
    frame = MetricService.signature_decompose(metric)
    det_ref = float(np.linalg.det(frame.gTilde))

    length = None
    if args.curve:
        if problem.builtin != "aff":
            raise SpecValidationError("--curve: named curves live in the aff chart; use a spec with builtin 'aff'")
        curves = CatalogService.aff_witness_curves()
        if args.curve not in curves:
            raise SpecValidationError(f"--curve: unknown curve '{args.curve}'; available: {', '.join(curves)}")
        curve = curves[args.curve]
        params = curve.params
        ad_invs = [AffChart.ad_inv(*curve.point(t)) for t in params]
        result = ClairautService.curve_length(CatalogService.aff_clairaut_field(metric), curve.sampled())
        length = CurveLengthDoc(
            length=result.length, refinements=result.refinements, samples=result.samples,
            converged=result.converged, tail_estimate=result.tail_estimate, tail_flag=result.tail_flag,
        )
        name = curve.name
    else:
        ad_invs = _load_points(args.points, problem.algebra.dim)
        params = np.arange(len(ad_invs), dtype=np.float64)
        name = args.points

    rows = []
    for t, Ainv in zip(params, ad_invs):
        H = ClairautService.clairaut_form_at(Ainv, metric, frame)
        lo, hi = ClairautService.clairaut_spectrum(H, frame.gTilde)
        rows.append((float(t), lo, hi, float(np.linalg.det(H)) / det_ref))
    if args.csv:
        export_spectrum_csv(rows, args.csv)

    report = ClairautReport(
        curve=name,
        points=len(rows),
        length=length,
        lam_min_sq=min(r[1] for r in rows),
        lam_max_sq=max(r[2] for r in rows),
        csv=args.csv,
    )
    return report, 0
