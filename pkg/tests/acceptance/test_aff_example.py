"""End-to-end checks of every closed-form number the aff(R) example and the growth taxonomy predict."""
import numpy as np
import pytest

from app.core.models.catalog import AffChart
from app.core.models.flow import Blowup
from app.core.models.growth import Bounded, Exponential, Linear, Polynomial
from app.core.setting import config
from app.modules.catalog import CatalogService
from app.modules.clairaut import ClairautService
from app.modules.flow import GeodesicIntegrator
from app.modules.growth import GrowthService, VerdictService
from app.modules.metric import MetricService
from tests.conftest import random_invertible, random_metric

CATALOG = ("abelian:3", "aff", "heis3", "n4", "so3", "sl2", "e2")


# =============================================================================
# incomplete geodesics
# =============================================================================


class TestIncompleteGeodesic:
    @pytest.mark.parametrize("preset, x0", [("g-1", [1.0, 1.0]), ("g0", [1.0, 0.0])])
    def test_blowup_and_closed_form(self, aff, preset, x0):
        x0 = np.array(x0)
        traj = GeodesicIntegrator.integrate_geodesic(aff.algebra, aff.presets[preset], x0, t_max=2.0)
        assert isinstance(traj.status, Blowup)
        assert traj.status.contains(1.0)
        assert traj.status.width <= 1e-3

        mask = traj.times <= 0.9
        exact = x0[None, :] / (1.0 - traj.times[mask])[:, None]
        rel = np.linalg.norm(traj.xs[mask] - exact, axis=1) / np.linalg.norm(exact, axis=1)
        assert rel.max() <= 1e-6


# =============================================================================
# Clairaut closed forms and lengths
# =============================================================================


class TestClairautClosedForms:
    @pytest.mark.parametrize("eps, preset", [(1, "g1"), (-1, "g-1")])
    def test_hundred_points(self, aff, rng, eps, preset):
        field = CatalogService.aff_clairaut_field(aff.presets[preset])
        for x, y in zip(rng.uniform(0.1, 10.0, 100), rng.uniform(-5.0, 5.0, 100)):
            H = field((x, y))
            H_ref, det, (lo, hi) = CatalogService.aff_reference(x, y, eps)
            assert np.max(np.abs(H - H_ref)) <= 1e-12 * np.max(np.abs(H_ref))
            assert np.linalg.det(H) == pytest.approx(det, rel=1e-12)
            assert ClairautService.clairaut_spectrum(H, np.eye(2)) == pytest.approx((lo, hi), rel=1e-10)

    def test_lengths(self, aff):
        curves = CatalogService.aff_witness_curves()
        fields = {k: CatalogService.aff_clairaut_field(aff.presets[k]) for k in ("g1", "g-1", "g0")}

        hyperbola = ClairautService.curve_length(fields["g-1"], curves["h-1-diverging"].sampled())
        assert abs(hyperbola.length - np.pi / 2) <= 1e-6
        assert hyperbola.length <= 2.0

        ray = ClairautService.curve_length(fields["g0"], curves["h0-ray"].sampled())
        assert abs(ray.length - 1.0) <= 1e-5

        for T in (1e2, 1e4):
            result = ClairautService.curve_length(fields["g1"], curves["h0-ray"].sampled(np.geomspace(1.0, T, 81)))
            assert abs(result.length - np.log(T)) <= 1e-6


# =============================================================================
# growth taxonomy
# =============================================================================


class TestGrowthTaxonomy:
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0, np.exp(10.0)])
    def test_aff_adjoint_norm(self, x):
        exact = np.sqrt(1.0 + x * x + abs(1.0 - x * x)) / np.sqrt(2.0)
        assert GrowthService.ad_operator_norm(AffChart.ad(x, 0.0), np.eye(2)) == pytest.approx(exact, rel=1e-9)

    def test_aff_exponential(self, aff):
        report = GrowthService.scan_and_classify(aff.algebra, np.array([1.0, 0.0]), np.eye(2))
        assert isinstance(report.fit, Exponential)
        assert abs(report.fit.rate - 1.0) <= 0.01

    def test_heis3_linear(self, heis3, rng):
        for _ in range(50):
            theta = rng.uniform(0.0, 2.0 * np.pi)
            a = np.array([np.cos(theta), np.sin(theta), rng.uniform(-1.0, 1.0)])
            assert isinstance(GrowthService.scan_and_classify(heis3.algebra, a, np.eye(3)).fit, Linear)

    def test_n4_quadratic(self):
        alg = CatalogService.load_builtin("n4").algebra
        report = GrowthService.scan_and_classify(alg, np.eye(4)[0], np.eye(4))
        assert report.fit == Polynomial(degree=2)

    def test_bounded(self, so3, rng):
        gT = MetricService.signature_decompose(so3.presets["minus-killing"]).gTilde
        assert isinstance(GrowthService.scan_and_classify(so3.algebra, rng.standard_normal(3), gT).fit, Bounded)
        abelian = CatalogService.load_builtin("abelian:3").algebra
        assert isinstance(GrowthService.scan_and_classify(abelian, rng.standard_normal(3), np.eye(3)).fit, Bounded)


# =============================================================================
# conservation
# =============================================================================


class TestConservation:
    def test_energy_and_charges(self, rng):
        names = ("abelian:3", "heis3", "so3", "e2")
        for k in range(20):
            alg = CatalogService.load_builtin(names[k % len(names)]).algebra
            metric = random_metric(rng, alg.dim)
            x0 = rng.standard_normal(alg.dim)
            x0 /= np.linalg.norm(x0)
            traj = GeodesicIntegrator.integrate_geodesic(alg, metric, x0, t_max=10.0)
            drift = GeodesicIntegrator.charge_drift(traj)
            assert drift.energy <= 1e-6
            assert drift.max_charge <= 1e-6


# =============================================================================
# idempotents
# =============================================================================


class TestIdempotentSearch:
    def test_aff_roots(self, aff):
        lorentz = GrowthService.idempotent_search(aff.algebra, aff.presets["g-1"])
        assert any(np.linalg.norm(r - [1.0, 1.0]) <= 1e-8 for r in lorentz)
        null = GrowthService.idempotent_search(aff.algebra, aff.presets["g0"])
        assert any(np.linalg.norm(r - [1.0, 0.0]) <= 1e-8 for r in null)
        for metric, roots in ((aff.presets["g-1"], lorentz), (aff.presets["g0"], null)):
            for x0 in roots:
                assert GrowthService.idempotent_residual(aff.algebra, metric, x0) <= 1e-10
                assert abs(metric(x0, x0)) <= 1e-5

    @pytest.mark.parametrize("name", CATALOG)
    def test_definite_metrics_have_none(self, name, rng):
        alg = CatalogService.load_builtin(name).algebra
        for sign in (1, -1):
            metric = random_metric(rng, alg.dim, negatives=0 if sign > 0 else alg.dim)
            assert GrowthService.idempotent_search(alg, metric) == []


# =============================================================================
# verdict table
# =============================================================================


def random_aff_form(rng, definite: bool) -> tuple[float, float, float]:
    while True:
        c1, c2, c3 = rng.uniform(-2.0, 2.0, 3)
        if rng.random() < 0.2:
            c3 = 0.0
        det = c1 * c3 - c2 * c2
        if abs(det) > 1e-3 and (det > 0) == definite:
            return c1, c2, c3


class TestVerdictTable:
    def test_abelian(self, rng):
        alg = CatalogService.load_builtin("abelian:3").algebra
        for _ in range(20):
            verdict = VerdictService.completeness_verdict(alg, random_metric(rng, 3))
            assert (verdict.verdict, verdict.certificate) == ("CompleteCertified", "abelian")

    def test_heis3_lorentzian(self, heis3, rng):
        for _ in range(20):
            verdict = VerdictService.completeness_verdict(heis3.algebra, random_metric(rng, 3, negatives=1))
            assert (verdict.verdict, verdict.certificate) == ("CompleteCertified", "2-step-nilpotent")

    def test_so3_minus_killing(self, so3):
        verdict = VerdictService.completeness_verdict(so3.algebra, so3.presets["minus-killing"])
        assert (verdict.verdict, verdict.certificate) == ("CompleteCertified", "bi-invariant")

    def test_e2_declared(self, rng):
        entry = CatalogService.load_builtin("e2")
        for negatives in (1, 2, 1, 2):
            metric = random_metric(rng, 3, negatives)
            verdict = VerdictService.completeness_verdict(entry.algebra, metric, declaration=entry.declaration)
            assert (verdict.verdict, verdict.certificate) == ("CompleteCertified", "pseudo-compact-semidirect")

    @pytest.mark.parametrize("definite", [True, False])
    def test_aff_forms_and_orbits(self, aff, rng, definite):
        for _ in range(20):
            c1, c2, c3 = random_aff_form(rng, definite)
            metric = MetricService.make_metric([[c1, c2], [c2, c3]])
            verdict = VerdictService.completeness_verdict(aff.algebra, metric, restarts=config.NEWTON_RESTARTS)
            orbit = MetricService.aff_orbit_classify(c1, c2, c3)
            if definite:
                assert (verdict.verdict, verdict.certificate) == ("CompleteCertified", "definite")
                assert orbit == "Definite"
            else:
                assert verdict.verdict == "IncompleteCertified"
                assert orbit == ("LorentzE2Isotropic" if c3 == 0.0 else "LorentzE2NonIsotropic")


# =============================================================================
# bi-Lipschitz and sharp bounds
# =============================================================================


class TestClairautBounds:
    @pytest.mark.parametrize("name", ["heis3", "so3", "sl2"])
    def test_basis_change_ratios(self, name, rng):
        alg = CatalogService.load_builtin(name).algebra
        n = alg.dim
        violations = 0
        for _ in range(20):
            metric = random_metric(rng, n)
            E, M = random_invertible(rng, n), random_invertible(rng, n)
            lo, hi = np.linalg.eigvalsh(M.T @ M)[[0, -1]]
            for _ in range(50):
                A = random_invertible(rng, n)
                v = rng.standard_normal(n)
                ratio = (v @ ClairautService.clairaut_form_from_basis(A, metric, E @ M) @ v) / (
                    v @ ClairautService.clairaut_form_from_basis(A, metric, E) @ v
                )
                violations += not (lo * (1 - 1e-10) <= ratio <= hi * (1 + 1e-10))
        assert violations == 0

    def test_null_and_lorentzian_not_bi_lipschitz(self, aff):
        ts = np.geomspace(10.0, 1e4, 13)
        report = ClairautService.bi_lipschitz_probe(
            CatalogService.aff_clairaut_field(aff.presets["g0"]),
            CatalogService.aff_clairaut_field(aff.presets["g-1"]),
            [np.array([t, 0.0]) for t in ts], [np.array([1.0, 0.0])] * len(ts), ray=True,
        )
        assert report.trend == "divergent"

    def test_sharp_lower_bound(self, rng):
        for _ in range(1000):
            n = int(rng.integers(2, 5))
            metric = random_metric(rng, n)
            frame = MetricService.signature_decompose(metric)
            Ainv = random_invertible(rng, n)
            H = ClairautService.clairaut_form_at(Ainv, metric, frame)
            lo, _ = ClairautService.clairaut_spectrum(H, frame.gTilde)
            bound = 1.0 / GrowthService.ad_operator_norm(np.linalg.inv(Ainv), frame.gTilde) ** 2
            assert lo >= bound - 1e-10
            assert abs(lo - bound) <= 1e-8 * max(1.0, bound)
