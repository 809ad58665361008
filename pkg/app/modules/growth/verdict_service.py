import logging

import numpy as np

from app.core.exceptions import SpecValidationError
from app.core.models.algebra import LieAlgebra
from app.core.models.flow import Blowup
from app.core.models.growth import (
    BlowupWitness, CompletenessVerdict, IdempotentWitness, ProbeSummary,
    SemidirectDeclaration,
)
from app.core.models.metric import MetricForm, WickFrame
from app.core.monitoring.metrics import track_verdict
from app.core.setting import config
from app.modules.algebra import AlgebraService
from app.modules.flow import GeodesicIntegrator
from app.modules.growth.growth_service import GrowthService
from app.modules.metric import MetricService

logger = logging.getLogger(__name__)


class VerdictService:
    """
    Completeness decision ladder; the first matching rule wins.

    1. abelian algebra              -> CompleteCertified(abelian)
    2. every ad_{e_i} skew for g_1  -> CompleteCertified(bi-invariant)
    3. definite metric              -> CompleteCertified(definite)
    4. nilpotency step <= 2         -> CompleteCertified(2-step-nilpotent)
    5. Killing form negative def.   -> CompleteCertified(compact-type)
    6. basis-aligned direct sum whose factors are 2-step nilpotent or
       abelian plus compact type    -> CompleteCertified(direct-product)
    7. declared K ⋉ R^m, K abelian plus compact type, ρ preserves a PD form
                                    -> CompleteCertified(pseudo-compact-semidirect)
    8. idempotent found             -> IncompleteCertified
    9. blowup in the probe ensemble -> NumericallyIncomplete
    10. otherwise                   -> Undetermined with growth reports
    """

    @staticmethod
    def _is_bi_invariant(alg: LieAlgebra, metric: MetricForm) -> bool:
        return all(
            MetricService.is_skew_adjoint(ad, metric)
            for ad in AlgebraService.ad_basis(alg)
        )

    @staticmethod
    def _killing_negative_definite(alg: LieAlgebra) -> bool:
        w = np.linalg.eigvalsh(AlgebraService.killing_form(alg))
        return bool(w[-1] < -config.RANK_RTOL * max(1.0, float(np.max(np.abs(w)))))

    @staticmethod
    def _linear_growth_factor(alg: LieAlgebra) -> bool:
        step = AlgebraService.nilpotency_step(alg).step
        return (step is not None and step <= 2) or AlgebraService.is_compact_type_with_center(alg)

    @staticmethod
    def _certified_direct_product(alg: LieAlgebra) -> bool:
        factors = AlgebraService.direct_factors(alg)
        if len(factors) < 2:
            return False
        logger.debug(f"Algebra splits into factors of dimensions {[f.dim for f in factors]}")
        return all(VerdictService._linear_growth_factor(f) for f in factors)

    @staticmethod
    def _declared_pseudo_compact(alg: LieAlgebra, declaration: SemidirectDeclaration) -> bool:
        rebuilt = AlgebraService.semidirect_product(declaration.k_algebra, declaration.rep, declaration.m)
        if rebuilt.dim != alg.dim or not np.allclose(rebuilt.structure, alg.structure, atol=1e-12):
            raise SpecValidationError("Declared semidirect decomposition does not reproduce the algebra")
        if not AlgebraService.is_compact_type_with_center(declaration.k_algebra):
            logger.debug("Declared K is not abelian plus compact type")
            return False
        S = GrowthService.invariant_pd_form(list(declaration.rep), m=declaration.m)
        return S is not None

    @staticmethod
    def _growth_reports(alg: LieAlgebra, frame: WickFrame):
        return [
            GrowthService.scan_and_classify(alg, e, frame.gTilde)
            for e in np.eye(alg.dim)
        ]

    @staticmethod
    def _finish(verdict: CompletenessVerdict) -> CompletenessVerdict:
        track_verdict(verdict.verdict)
        detail = verdict.certificate or (verdict.witness.kind if verdict.witness else "")
        logger.info(f"Verdict: {verdict.verdict} {detail}".rstrip())
        return verdict

    @staticmethod
    def completeness_verdict(
        alg: LieAlgebra,
        metric: MetricForm,
        declaration: SemidirectDeclaration | None = None,
        probes: int | None = None,
        seed: int | None = None,
        restarts: int | None = None,
        probe_t_max: float | None = None,
    ) -> CompletenessVerdict:
        probes = config.PROBES if probes is None else probes
        seed = config.SEED if seed is None else seed
        probe_t_max = config.PROBE_T_MAX if probe_t_max is None else probe_t_max
        if metric.dim != alg.dim:
            raise SpecValidationError(f"Metric dimension {metric.dim} does not match algebra dimension {alg.dim}")
        finish = VerdictService._finish

        frame = MetricService.signature_decompose(metric)
        if alg.is_abelian:
            return finish(CompletenessVerdict("CompleteCertified", certificate="abelian"))
        if VerdictService._is_bi_invariant(alg, metric):
            return finish(CompletenessVerdict("CompleteCertified", certificate="bi-invariant"))
        if frame.definite:
            return finish(CompletenessVerdict("CompleteCertified", certificate="definite"))
        step = AlgebraService.nilpotency_step(alg).step
        if step is not None and step <= 2:
            return finish(CompletenessVerdict("CompleteCertified", certificate="2-step-nilpotent"))
        if VerdictService._killing_negative_definite(alg):
            return finish(CompletenessVerdict("CompleteCertified", certificate="compact-type"))
        if VerdictService._certified_direct_product(alg):
            return finish(CompletenessVerdict("CompleteCertified", certificate="direct-product"))
        if declaration is not None and VerdictService._declared_pseudo_compact(alg, declaration):
            return finish(CompletenessVerdict("CompleteCertified", certificate="pseudo-compact-semidirect"))

        idempotents = GrowthService.idempotent_search(alg, metric, restarts=restarts, seed=seed)
        if idempotents:
            x0 = idempotents[0]
            witness = IdempotentWitness(
                x0=x0,
                residual=GrowthService.idempotent_residual(alg, metric, x0),
                eigenvector=GrowthService.idempotent_eigenvector(alg, x0),
                geodesic=GrowthService.incomplete_geodesic(alg, x0),
            )
            growth = [GrowthService.scan_and_classify(alg, x0, frame.gTilde)]
            return finish(CompletenessVerdict("IncompleteCertified", witness=witness, growth_reports=growth))

        rng = np.random.default_rng(seed)
        starts = [v / np.linalg.norm(v) for v in rng.standard_normal((probes, alg.dim))]
        trajectories = GeodesicIntegrator.integrate_ensemble(alg, metric, starts, t_max=probe_t_max)
        summaries = [
            ProbeSummary(x0=x0, status=traj.status, samples=len(traj))
            for x0, traj in zip(starts, trajectories)
        ]
        for summary in summaries:
            if isinstance(summary.status, Blowup):
                return finish(CompletenessVerdict(
                    "NumericallyIncomplete",
                    witness=BlowupWitness(x0=summary.x0, status=summary.status),
                    probes=summaries,
                ))

        return finish(CompletenessVerdict(
            "Undetermined",
            growth_reports=VerdictService._growth_reports(alg, frame),
            probes=summaries,
        ))
