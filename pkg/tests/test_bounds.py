import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectra_bochner import bounds as bd, spectral as spec
from spectra_bochner.errors import DenominatorNonpositive, DimensionTooSmall


class TestSchoutenBound:
    def test_round_s4(self):
        assert bd.schouten_bound(4, 12.0, 1.0, 3.0) == pytest.approx(4.0)

    def test_round_s5(self):
        assert bd.schouten_bound(5, 20.0, 1.0, 4.0) == pytest.approx(7.5)

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_sphere_equality_all_dims(self, n):
        b = bd.schouten_bound(n, float(n * (n - 1)), 1.0, float(n - 1))
        mu = spec.analytic_sphere_spectrum(n, 1.0, spec.OP_SCHOUTEN, 1)[0]
        assert b == pytest.approx(mu, rel=1e-14)
        assert mu == pytest.approx(n * (n - 2) / 2.0, rel=1e-14)

    def test_dimension_too_small(self):
        with pytest.raises(DimensionTooSmall):
            bd.schouten_bound(3, 6.0, 1.0, 2.0)

    def test_denominator_nonpositive(self):
        with pytest.raises(DenominatorNonpositive):
            bd.schouten_bound(4, 12.0, 1.0, 6.0)

    def test_lambda0_and_gamma(self):
        inp = bd.SchoutenBoundInput(4, 12.0, 1.0, 3.0)
        assert inp.lambda0 == pytest.approx(1.0)  # 3 - 12/6
        assert inp.gamma == pytest.approx(6.0)    # 9 - 3*3 + 6

    def test_metric_scaling_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            n = int(rng.integers(4, 8))
            K0 = rng.uniform(0.2, 1.5)
            L0 = rng.uniform((n - 1) * K0 * 0.8, (n - 1) * K0)
            R = rng.uniform(2 * L0 + 0.5, 2 * (n - 1) * L0)
            t = rng.uniform(0.5, 2.0)
            b0 = bd.schouten_bound(n, R, K0, L0)
            b1 = bd.schouten_bound(n, R / t ** 2, K0 / t ** 2, L0 / t ** 2)
            assert b1 * t ** 4 == pytest.approx(b0, rel=1e-10)


class TestNewtonBound:
    @pytest.mark.parametrize("n,kappa,alpha,expect", [
        (2, 0.0, 1.0, 2.0),
        (2, 0.0, 2.0, 16.0),
        (3, 1.0, 1.0, 12.0),
        (2, -1.0, 2.0, 12.0),
    ])
    def test_umbilic_equality(self, n, kappa, alpha, expect):
        b = bd.newton_bound(n, kappa, alpha, 1.0, 0.0)
        assert b == pytest.approx(expect, rel=1e-14)
        assert bd.sphere_equality_value(n, alpha, kappa) == pytest.approx(
            expect, rel=1e-14)

    @given(st.integers(min_value=2, max_value=6),
           st.floats(min_value=0.2, max_value=2.0))
    @settings(max_examples=30, deadline=None)
    def test_branch_continuity_at_kappa_zero(self, n, alpha):
        up = bd.newton_bound(n, 1e-12, alpha, 1.3, 0.1)
        dn = bd.newton_bound(n, -1e-12, alpha, 1.3, 0.1)
        assert up == pytest.approx(dn, abs=1e-9)

    def test_monotone_decreasing_in_sigma(self):
        vals = [bd.newton_bound(3, 1.0, 1.0, 1.2, s)
                for s in np.linspace(0.0, 2.0, 9)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_monotone_decreasing_in_a(self):
        for kappa in (1.0, -1.0):
            vals = [bd.newton_bound(3, kappa, 1.0, a, 0.0)
                    for a in np.linspace(1.0, np.sqrt(3.0), 9)]
            assert all(x > y for x, y in zip(vals, vals[1:]))

    @given(st.integers(min_value=2, max_value=6),
           st.floats(min_value=-1.5, max_value=1.5),
           st.floats(min_value=0.3, max_value=1.8),
           st.floats(min_value=1.0, max_value=1.6),
           st.floats(min_value=0.0, max_value=1.0),
           st.floats(min_value=0.5, max_value=2.0))
    @settings(max_examples=60, deadline=None)
    def test_scaling_covariance(self, n, kappa, alpha, a, sigma, t):
        b0 = bd.newton_bound(n, kappa, alpha, a, sigma)
        b1 = bd.newton_bound(n, kappa / t ** 2, alpha / t, a, sigma / t ** 3)
        assert b1 == pytest.approx(b0 / t ** 3,
                                   abs=1e-9 * max(1.0, abs(b0)))

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            bd.newton_bound(2, 0.0, -1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            bd.newton_bound(2, 0.0, 1.0, 0.9, 0.0)


class TestCompare:
    def test_analytic_equality(self):
        inp = bd.SchoutenBoundInput(4, 12.0, 1.0, 3.0)
        rep = bd.compare(inp, 4.0)
        assert rep.verdict == bd.VERDICT_EQUALITY
        assert abs(rep.margin) < 1e-12

    def test_fem_equality_tolerance(self):
        inp = bd.NewtonBoundInput(2, 0.0, 1.0, 1.0, 0.0)
        rep = bd.compare(inp, 2.0029, error_estimate=0.0011, analytic=False)
        assert rep.verdict == bd.VERDICT_EQUALITY

    def test_inequality(self):
        inp = bd.NewtonBoundInput(2, 0.0, 0.83, 1.32, 0.5)
        rep = bd.compare(inp, 1.808, error_estimate=6e-4, analytic=False)
        assert rep.verdict == bd.VERDICT_INEQUALITY
        assert rep.margin > 0

    def test_hypothesis_failed(self):
        inp = bd.SchoutenBoundInput(4, 12.0, 1.0, 3.0,
                                    harmonic_weyl_checked=False)
        assert bd.compare(inp, 4.0).verdict == bd.VERDICT_HYPOTHESIS_FAILED

    def test_violation_suspected(self):
        inp = bd.SchoutenBoundInput(4, 12.0, 1.0, 3.0)
        rep = bd.compare(inp, 3.5, error_estimate=0.01, analytic=False)
        assert rep.verdict == bd.VERDICT_VIOLATION

    def test_small_negative_margin_within_noise(self):
        inp = bd.NewtonBoundInput(2, 0.0, 1.0, 1.0, 0.0)
        rep = bd.compare(inp, 1.999, error_estimate=0.005, analytic=False)
        assert rep.verdict != bd.VERDICT_VIOLATION
