import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectra_bochner import geometry as geom
from spectra_bochner.errors import (ConfigError, DegeneratePlane,
                                    NonPositiveMetric, SchoutenUndefined)


def frame_riemann_constant_curvature(n, K):
    d = np.eye(n)
    return K * (np.einsum("ik,jl->ijkl", d, d)
                - np.einsum("il,jk->ijkl", d, d))


class TestCurvature:
    def test_flat_torus_curvature_vanishes(self):
        m = geom.flat_torus(2)
        cb = geom.curvature_at(m, np.array([0.3, 1.1]))
        assert np.max(np.abs(cb.riemann)) < 1e-12
        assert abs(cb.scalar) < 1e-12

    @pytest.mark.parametrize("n,K", [(2, 1.0), (3, 1.0), (4, 2.0), (5, 0.5)])
    def test_round_sphere_frame_components(self, n, K):
        m = geom.round_sphere(n, K)
        p = np.full(n, 0.21)
        cb = geom.curvature_at(m, p)
        assert np.allclose(cb.riemann,
                           frame_riemann_constant_curvature(n, K), atol=1e-10)
        assert np.allclose(cb.ricci, (n - 1) * K * np.eye(n), atol=1e-10)
        assert abs(cb.scalar - n * (n - 1) * K) < 1e-9

    def test_sphere_chart_curvature_matches_closed_form(self):
        # the generic coordinate route must agree with the constant-curvature
        # fast path
        n, K = 3, 2.0
        m = geom.round_sphere(n, K)
        p = np.array([0.4, -0.2, 0.7])
        chart = m.chart()
        g, g_inv, E, Gamma, dGamma, Riem = geom.curvature_parts(chart, p)
        Rf = np.einsum("abcd,ai,bj,ck,dl->ijkl", Riem, E, E, E, E)
        assert np.allclose(Rf, frame_riemann_constant_curvature(n, K),
                           atol=1e-8)

    def test_sectional_positive_on_sphere(self):
        m = geom.round_sphere(4, 1.0)
        cb = geom.curvature_at(m, np.full(4, 0.1))
        u = np.array([1.0, 0.2, 0.0, 0.0])
        v = np.array([0.0, 1.0, -0.3, 0.0])
        assert abs(cb.sectional(u, v) - 1.0) < 1e-10

    def test_sectional_degenerate_plane_raises(self):
        m = geom.round_sphere(3, 1.0)
        cb = geom.curvature_at(m, np.full(3, 0.1))
        u = np.array([1.0, 0.0, 0.0])
        with pytest.raises(DegeneratePlane):
            cb.sectional(u, 2.0 * u)

    def test_weyl_vanishes_on_sphere(self):
        m = geom.round_sphere(4, 1.0)
        cb = geom.curvature_at(m, np.full(4, 0.3))
        assert np.max(np.abs(cb.weyl)) < 1e-10

    def test_min_sectional_and_ricci_on_sphere(self):
        m = geom.round_sphere(4, 2.0)
        assert geom.min_sectional(m) == pytest.approx(2.0, abs=1e-12)
        assert geom.min_ricci(m) == pytest.approx(6.0, abs=1e-12)


class TestJets:
    def test_orthonormal_frame(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            L = rng.standard_normal((n, n))
            g = L @ L.T + n * np.eye(n)
            E = geom.orthonormal_frame(g)
            assert np.allclose(E.T @ g @ E, np.eye(n), atol=1e-12)

    def test_commutation_rule_on_sphere(self):
        # third covariant derivatives: f_ijk - f_ikj = sum_m f_m R_mijk
        m = geom.round_sphere(3, 1.0)
        chart = m.chart()
        f = geom.sphere_coordinate_field(m, 0)
        p = np.array([0.4, -0.1, 0.25])
        _, fi, _, fijk = geom.scalar_jets(chart, f, p, 3)
        Rf = geom.curvature_at(m, p).riemann
        lhs = fijk - fijk.transpose(0, 2, 1)
        rhs = np.einsum("m,mijk->ijk", fi, Rf)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_third_derivative_fd_oracle(self):
        # independent route: FD covariant derivative of the Hessian tensor
        m = geom.round_sphere(2, 1.0)
        chart = m.chart()
        f = geom.sphere_coordinate_field(m, 1)
        p = np.array([0.3, -0.45])

        def hess_coord(q):
            parts = f.partials(q, 2)
            g, dg = geom.metric_jets(chart, q, 1)
            Gamma = geom.christoffel(np.linalg.inv(g), dg)
            return parts[2] - np.einsum("cab,c->ab", Gamma, parts[1])

        h = 1e-5
        g, dg = geom.metric_jets(chart, p, 1)
        Gamma = geom.christoffel(np.linalg.inv(g), dg)
        dH = geom.fd_derivative(hess_coord, p, h)  # dH[e, a, b]
        H = hess_coord(p)
        covH = (dH
                - np.einsum("cae,cb->eab", Gamma, H)
                - np.einsum("cbe,ac->eab", Gamma, H)).transpose(1, 2, 0)
        E = geom.orthonormal_frame(g)
        oracle = np.einsum("abc,ai,bj,ck->ijk", covH, E, E, E)
        _, _, _, fijk = geom.scalar_jets(chart, f, p, 3)
        assert np.max(np.abs(fijk - oracle)) < 1e-8

    def test_tensor_jets_metric_is_parallel(self):
        m = geom.round_sphere(3, 1.0)
        chart = m.chart()
        p = np.array([0.2, 0.5, -0.3])
        ph, p3 = geom.tensor_jets(chart, chart.metric, p, 1)
        assert np.allclose(ph, np.eye(3), atol=1e-12)
        assert np.max(np.abs(p3)) < 1e-10

    def test_trig_field_partials_match_fd(self):
        f = geom.trig_field(np.array([1.0, 2.0]), phase=0.3)
        p = np.array([0.7, -0.2])
        val, g1, h1, t1 = f.partials(p, 3)
        g_fd = geom.fd_derivative(lambda q: f.eval(q), p, 1e-6)
        assert np.allclose(g1, g_fd, atol=1e-8)
        h_fd = geom.fd_derivative(lambda q: f.partials(q, 1)[1], p, 1e-6)
        assert np.allclose(h1, h_fd, atol=1e-7)

    def test_radial_jets_match_fd(self):
        wd = geom._inv_power_derivs(3.0, 2.0, order=3)
        x = np.array([0.4, -0.6, 0.1])
        val, g1, h1, t1 = geom._radial_scalar_jets(wd, x, 3)
        fn = lambda q: wd[0](float(q @ q))
        assert np.allclose(g1, geom.fd_derivative(fn, x, 1e-6), atol=1e-8)


class TestDivergenceIdentities:
    def test_flat_torus_all_zero(self):
        rep = geom.divergence_identity_suite(geom.flat_torus(2), samples=5)
        assert rep["item1_div_ric_minus_cI"] == 0.0
        assert rep["item2_div_einstein"] == 0.0
        assert rep["item5_div_schouten"] == 0.0

    def test_sphere_defects_tiny(self):
        rep = geom.divergence_identity_suite(geom.round_sphere(4, 1.0),
                                             samples=8)
        assert rep["R_constant"]
        assert rep["item1_div_ric_minus_cI"] < 1e-10
        assert rep["item2_div_einstein"] < 1e-10
        assert rep["item5_div_schouten"] < 1e-10

    def test_perturbed_torus_skips_item1(self):
        rep = geom.divergence_identity_suite(geom.perturbed_torus(2),
                                             samples=6)
        assert not rep["R_constant"]
        assert rep["item1_div_ric_minus_cI"] is None
        assert rep["item1_flag"] == "R_not_constant"
        assert rep["item2_div_einstein"] < 1e-10

    def test_perturbed_torus3_bianchi(self):
        rep = geom.divergence_identity_suite(geom.perturbed_torus(3),
                                             samples=4, fd_step=1e-3)
        assert rep["item2_div_einstein"] < 1e-7
        assert rep["item5_div_schouten"] < 1e-7


class TestFieldsAndErrors:
    def test_schouten_undefined_in_dim2(self):
        with pytest.raises(SchoutenUndefined):
            geom.schouten_tensor_field(geom.flat_torus(2))

    def test_nonpositive_metric_raises(self):
        bad = geom.SymmetricTensorField(comp=lambda p: -np.eye(2))
        chart = geom.Chart(lo=np.zeros(2), hi=np.ones(2), metric=bad)
        with pytest.raises(NonPositiveMetric):
            geom.metric_jets(chart, np.array([0.5, 0.5]), 0)

    def test_parse_manifold(self):
        m = geom.parse_manifold("torus2:L=6.283185307179586")
        assert m.dim == 2 and m.atlas_kind == geom.ATLAS_PERIODIC_BOX
        s = geom.parse_manifold("sphere:n=4,K=1")
        assert s.dim == 4 and s.constant_curvature == 1.0
        with pytest.raises(ConfigError):
            geom.parse_manifold("klein-bottle:x=1")

    def test_random_spd_tensor_is_spd_and_analytic(self):
        phi = geom.random_spd_trig_tensor(3, seed=11)
        rng = np.random.default_rng(0)
        for _ in range(10):
            p = rng.uniform(0, 2 * np.pi, size=3)
            w = np.linalg.eigvalsh(phi.comp(p))
            assert w[0] > 0
            d_fd = geom.fd_derivative(phi.comp, p, 1e-6)
            # dcomp convention: [c, a, b] = d_c phi_ab
            assert np.allclose(phi.dcomp(p), d_fd, atol=1e-7)

    @given(st.integers(min_value=2, max_value=5), st.integers())
    @settings(max_examples=20, deadline=None)
    def test_christoffel_symmetric_lower(self, n, seed):
        rng = np.random.default_rng(abs(seed) % 2 ** 32)
        phi = geom.random_spd_trig_tensor(n, seed=abs(seed) % 1000)
        p = rng.uniform(0, 2 * np.pi, size=n)
        g = phi.comp(p)
        dg = phi.dcomp(p)
        Gamma = geom.christoffel(np.linalg.inv(g), dg)
        assert np.allclose(Gamma, Gamma.transpose(0, 2, 1), atol=1e-12)

    def test_sample_points_shapes(self):
        rng = np.random.default_rng(0)
        m = geom.flat_torus(3)
        pts = m.sample_points(7, rng)
        assert pts.shape == (7, 3)
        s = geom.round_sphere(2, 1.0)
        pts = s.sample_points(11, rng)
        assert pts.shape == (11, 2)
