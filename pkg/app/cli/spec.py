import logging
from dataclasses import dataclass

import numpy as np
from pydantic import ValidationError

from app.core.exceptions import SpecValidationError
from app.core.models.algebra import LieAlgebra
from app.core.models.growth import SemidirectDeclaration
from app.core.models.metric import MetricForm
from app.core.schemas.analysis import (
    AnalysisSpec, BuiltinAlgebra, InlineAlgebra, MatrixMetric, SemidirectAlgebra,
)
from app.modules.algebra import AlgebraService
from app.modules.catalog import CatalogService
from app.modules.metric import MetricService

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Problem:
    """Resolved algebra + metric (+ optional semidirect declaration) of a spec."""
    spec: AnalysisSpec
    algebra: LieAlgebra
    metric: MetricForm
    declaration: SemidirectDeclaration | None = None
    builtin: str | None = None


def _format_error(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        path = ".".join(str(p) for p in err["loc"]) or "<root>"
        parts.append(f"{path}: {err['msg']}")
    return "; ".join(parts)


def _inline(source: InlineAlgebra) -> LieAlgebra:
    return AlgebraService.from_brackets(
        source.dim, [(b.i, b.j, b.coeffs) for b in source.brackets], source.labels,
    )


def _resolve_algebra(source) -> tuple[LieAlgebra, SemidirectDeclaration | None, str | None]:
    if isinstance(source, BuiltinAlgebra):
        entry = CatalogService.load_builtin(source.builtin)
        return entry.algebra, entry.declaration, entry.name
    if isinstance(source, InlineAlgebra):
        return _inline(source), None, None
    if isinstance(source, SemidirectAlgebra):
        sd = source.semidirect
        k_alg = CatalogService.load_builtin(sd.k.builtin).algebra if isinstance(sd.k, BuiltinAlgebra) else _inline(sd.k)
        rep = np.array(sd.rep, dtype=np.float64)
        if rep.shape != (k_alg.dim, sd.m, sd.m):
            raise SpecValidationError(
                f"algebra.semidirect.rep: expected {k_alg.dim} matrices of size {sd.m}x{sd.m}, got shape {rep.shape}"
            )
        alg = AlgebraService.semidirect_product(k_alg, rep, sd.m)
        return alg, SemidirectDeclaration(k_algebra=k_alg, rep=rep, m=sd.m), None
    raise SpecValidationError("algebra: exactly one of builtin, dim/brackets or semidirect is required")


def resolve_problem(spec: AnalysisSpec) -> Problem:
    algebra, declaration, builtin = _resolve_algebra(spec.algebra)
    if isinstance(spec.metric, MatrixMetric):
        G = np.array(spec.metric.matrix, dtype=np.float64)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise SpecValidationError(f"metric.matrix: must be square, got shape {G.shape}")
        if G.shape[0] != algebra.dim:
            raise SpecValidationError(
                f"metric.matrix: dimension {G.shape[0]} does not match algebra dimension {algebra.dim}"
            )
        metric = MetricService.make_metric(G)
    else:
        if builtin is None:
            raise SpecValidationError("metric.preset: presets are only available for builtin algebras")
        metric = CatalogService.preset(CatalogService.load_builtin(builtin), spec.metric.preset)
    return Problem(spec=spec, algebra=algebra, metric=metric, declaration=declaration, builtin=builtin)


def parse_spec(text: str) -> AnalysisSpec:
    """
    Validate a JSON analysis document and fill task defaults.
    The algebra and metric are resolved once so dimension mismatches surface here.
    """
    try:
        spec = AnalysisSpec.model_validate_json(text)
    except ValidationError as e:
        raise SpecValidationError(_format_error(e)) from e
    resolve_problem(spec)
    return spec


def load_spec_file(path: str) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SpecValidationError(f"Cannot read spec file '{path}': {e}") from e
    return resolve_problem(parse_spec(text))


def dump_spec(spec: AnalysisSpec) -> str:
    return spec.model_dump_json(by_alias=True, indent=2)


def parse_vector(text: str, dim: int, name: str = "vector") -> np.ndarray:
    try:
        values = np.array([float(v) for v in text.split(",")], dtype=np.float64)
    except ValueError as e:
        raise SpecValidationError(f"{name}: expected comma-separated numbers, got '{text}'") from e
    if values.shape != (dim,):
        raise SpecValidationError(f"{name}: expected {dim} components, got {values.size}")
    return values


def parse_grid(text: str) -> np.ndarray:
    """'log:t0,t1,N' -> N log-spaced points between t0 and t1."""
    kind, _, body = text.partition(":")
    try:
        t0, t1, count = body.split(",")
        t0, t1, count = float(t0), float(t1), int(count)
    except ValueError as e:
        raise SpecValidationError(f"tGrid: expected 'log:t0,t1,N', got '{text}'") from e
    if kind != "log" or not 0 < t0 < t1 or count < 2:
        raise SpecValidationError(f"tGrid: expected 'log:t0,t1,N' with 0 < t0 < t1 and N >= 2, got '{text}'")
    return np.geomspace(t0, t1, count)
