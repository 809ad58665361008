import numpy as np
import pytest
from scipy.linalg import expm

from app.core.exceptions import DomainError, SpecValidationError
from app.core.models.catalog import AffChart
from app.modules.algebra import AlgebraService
from app.modules.catalog import CatalogService, run_aff_reproduction
from app.modules.metric import MetricService


def aff_matrix(x: float, y: float) -> np.ndarray:
    return np.array([[x, y], [0.0, 1.0]])


# matrix realisation of aff: e1 = diag(1, 0), e2 = E_12
AFF_BASIS = (np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[0.0, 1.0], [0.0, 0.0]]))


def conjugation_matrix(g: np.ndarray) -> np.ndarray:
    """Ad_g in the e1, e2 basis computed by g X g^-1."""
    g_inv = np.linalg.inv(g)
    cols = []
    for X in AFF_BASIS:
        Y = g @ X @ g_inv
        cols.append([Y[0, 0], Y[0, 1]])
    return np.array(cols).T


# =============================================================================
# builtins
# =============================================================================


class TestBuiltins:
    @pytest.mark.parametrize("name", ["abelian:1", "abelian:5", "aff", "heis3", "n4", "so3", "sl2", "e2"])
    def test_builtins_are_lie_algebras(self, name):
        entry = CatalogService.load_builtin(name)
        assert AlgebraService.validate_algebra(entry.algebra).ok
        for metric in entry.presets.values():
            assert metric.dim == entry.algebra.dim

    @pytest.mark.parametrize("name", ["abelian:0", "abelian:x", "su2", ""])
    def test_unknown(self, name):
        with pytest.raises(SpecValidationError):
            CatalogService.load_builtin(name)

    def test_unknown_preset(self, aff):
        with pytest.raises(SpecValidationError, match="g-1"):
            CatalogService.preset(aff, "lorentz")

    def test_sl2_brackets(self):
        alg = CatalogService.load_builtin("sl2").algebra
        h, e, f = np.eye(3)
        assert np.allclose(AlgebraService.bracket(alg, h, e), 2 * e)
        assert np.allclose(AlgebraService.bracket(alg, h, f), -2 * f)
        assert np.allclose(AlgebraService.bracket(alg, e, f), h)
        assert alg.labels == ("h", "e", "f")

    def test_so3_minus_killing_is_positive(self, so3):
        assert np.allclose(so3.presets["minus-killing"].G, 2 * np.eye(3))

    def test_e2_declaration_reproduces_algebra(self):
        entry = CatalogService.load_builtin("e2")
        decl = entry.declaration
        rebuilt = AlgebraService.semidirect_product(decl.k_algebra, decl.rep, decl.m)
        assert np.allclose(rebuilt.structure, entry.algebra.structure)

    def test_only_aff_has_chart(self, aff, heis3):
        assert aff.chart is AffChart
        assert heis3.chart is None


# =============================================================================
# aff chart
# =============================================================================


class TestAffChart:
    def test_adjoint_matches_conjugation(self, rng):
        for x, y in zip(rng.uniform(0.1, 10.0, 20), rng.uniform(-5.0, 5.0, 20)):
            g = aff_matrix(x, y)
            assert np.allclose(AffChart.ad(x, y), conjugation_matrix(g))
            assert np.allclose(AffChart.ad_inv(x, y), conjugation_matrix(np.linalg.inv(g)))
            assert np.allclose(AffChart.ad(x, y) @ AffChart.ad_inv(x, y), np.eye(2))

    def test_adjoint_is_exp_of_ad(self, aff):
        a = np.array([0.4, -1.2])
        g = expm(a[0] * AFF_BASIS[0] + a[1] * AFF_BASIS[1])
        x, y = g[0, 0], g[0, 1]
        assert np.allclose(AffChart.ad(x, y), expm(AlgebraService.ad_matrix(aff.algebra, a)))

    def test_body_velocity(self):
        assert np.allclose(AffChart.body_velocity(np.array([2.0, 3.0]), np.array([4.0, 6.0])), [2.0, 3.0])

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_half_plane(self, x):
        with pytest.raises(DomainError):
            AffChart.ad_inv(x, 0.0)


# =============================================================================
# closed-form references
# =============================================================================


class TestAffReference:
    @pytest.mark.parametrize("eps", [1, -1])
    def test_reference_is_consistent(self, rng, eps):
        for x, y in zip(rng.uniform(0.1, 10.0, 30), rng.uniform(-5.0, 5.0, 30)):
            H, det, (lo, hi) = CatalogService.aff_reference(x, y, eps)
            assert np.linalg.det(H) == pytest.approx(det, rel=1e-10)
            assert np.linalg.eigvalsh(H) == pytest.approx([lo, hi], rel=1e-10)

    def test_reference_at_two_zero(self):
        H, det, spectrum = CatalogService.aff_reference(2.0, 0.0, -1)
        assert np.allclose(H, [[0.25, 0.0], [0.0, 0.0625]])
        assert det == pytest.approx(1 / 64)
        assert spectrum == pytest.approx((0.0625, 0.25))

    @pytest.mark.parametrize("x, eps", [(0.0, 1), (1.0, 0), (1.0, 2)])
    def test_reference_domain(self, x, eps):
        with pytest.raises(DomainError):
            CatalogService.aff_reference(x, 0.0, eps)

    @pytest.mark.parametrize("eps", [1, -1])
    def test_eigendirection_field(self, rng, eps):
        for x, y in zip(rng.uniform(0.1, 10.0, 20), rng.uniform(-5.0, 5.0, 20)):
            V = CatalogService.aff_eigendirection_field(x, y, eps)
            H, _, _ = CatalogService.aff_reference(x, y, eps)
            # V spans the kernel of the rank-one part, leaving only the y-independent piece
            assert V @ H @ V == pytest.approx(1.0 / x ** 2, rel=1e-10)

    def test_null_field(self, aff):
        field = CatalogService.aff_clairaut_field(aff.presets["g0"])
        for x, y in [(1.0, 0.0), (2.0, 3.0), (0.5, -1.0)]:
            expected = np.array([[1.0 + y * y, x * y], [x * y, x * x]]) / x ** 4
            assert np.allclose(field((x, y)), expected, atol=1e-12 * np.max(np.abs(expected)))


# =============================================================================
# automorphisms and orbits
# =============================================================================


class TestAffOrbits:
    def test_automorphism_preserves_bracket(self, aff, rng):
        M = CatalogService.aff_automorphism(0.7, -1.3)
        for _ in range(10):
            u, v = rng.standard_normal(2), rng.standard_normal(2)
            lhs = M @ AlgebraService.bracket(aff.algebra, u, v)
            rhs = AlgebraService.bracket(aff.algebra, M @ u, M @ v)
            assert np.allclose(lhs, rhs)

    def test_singular_automorphism(self):
        with pytest.raises(DomainError):
            CatalogService.aff_automorphism(1.0, 0.0)

    @pytest.mark.parametrize("kind", ["Definite", "LorentzE2NonIsotropic", "LorentzE2Isotropic"])
    def test_representatives_are_stable(self, kind, rng):
        rep = CatalogService.aff_orbit_representative(kind)
        for alpha, beta in zip(rng.uniform(-3.0, 3.0, 10), rng.uniform(0.2, 3.0, 10)):
            B = MetricService.transform_form(CatalogService.aff_automorphism(alpha, beta), rep)
            assert MetricService.aff_orbit_classify(B[0, 0], B[0, 1], B[1, 1]) == kind

    def test_unknown_orbit(self):
        with pytest.raises(DomainError):
            CatalogService.aff_orbit_representative("Null")


# =============================================================================
# witness curves and reproduction
# =============================================================================


class TestWitnessCurves:
    def test_curves(self):
        curves = CatalogService.aff_witness_curves()
        assert set(curves) == {"g-1-geodesic", "h-1-diverging", "h0-ray", "g0-geodesic"}
        assert np.allclose(curves["g-1-geodesic"].point(0.5), [2.0, 2.0])
        assert np.allclose(curves["h-1-diverging"].point(0.0), [1.0, 0.0])
        assert np.allclose(curves["h0-ray"].point(5.0), [5.0, 0.0])

    @pytest.mark.parametrize("name, x0", [("g-1-geodesic", [1.0, 1.0]), ("g0-geodesic", [1.0, 0.0])])
    def test_geodesic_body_velocity(self, name, x0):
        curve = CatalogService.aff_witness_curves()[name]
        for t in (0.0, 0.3, 0.8):
            body = AffChart.body_velocity(curve.point(t), curve.tangent(t))
            assert np.allclose(body, np.array(x0) / (1.0 - t))

    def test_hyperbola_is_integral_curve_of_kernel(self):
        curve = CatalogService.aff_witness_curves()["h-1-diverging"]
        for t in (0.0, 1.0, 3.0):
            x, y = curve.point(t)
            assert np.allclose(curve.tangent(t), CatalogService.aff_eigendirection_field(x, y, -1))


class TestAffReproduction:
    def test_all_checks_pass(self):
        checks = run_aff_reproduction(seed=0)
        failed = [c for c in checks if not c.passed]
        assert not failed, failed
        assert len(checks) >= 20
