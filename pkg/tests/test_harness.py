import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectra_bochner import harness as hz, hypersurface as hyp


class TestTraceInequality:
    def test_hand_example(self):
        # A = diag(1,2), B = I: tr(A^2 B) = 5, (tr AB)^2/tr B = 9/2
        d = hz.trace_inequality_defect(np.diag([1.0, 2.0]), np.eye(2))
        assert d == pytest.approx(0.25)  # (5 - 4.5) / tr B

    def test_scalar_matrix_equality(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            L = rng.standard_normal((n, n))
            B = L @ L.T + n * np.eye(n)
            assert abs(hz.trace_inequality_defect(3.0 * np.eye(n), B)) < 1e-12

    @given(st.integers(min_value=2, max_value=8), st.integers())
    @settings(max_examples=100, deadline=None)
    def test_single_trial_property(self, n, seed):
        rng = np.random.default_rng(abs(seed) % 2 ** 32)
        A = rng.uniform(-1, 1, size=(n, n))
        A = 0.5 * (A + A.T)
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        lam = rng.uniform(0.1, 10.0, size=n)
        B = (Q * lam) @ Q.T
        assert hz.trace_inequality_defect(A, B) >= -1e-10

    def test_bulk_trials_clean(self):
        rep = hz.newton_inequality_trials(hz.TrialConfig(trials=5000))
        assert rep["violations"] == 0
        assert rep["equality_false_positives"] == 0
        assert rep["worst_defect"] >= -1e-10

    def test_reproducible(self):
        cfg = hz.TrialConfig(trials=500, seed=9)
        assert (hz.newton_inequality_trials(cfg)
                == hz.newton_inequality_trials(cfg))


class TestQaBound:
    def test_hand_computed_point(self):
        Q = hyp.q_polynomial(np.diag([1.0, 1.1, 1.2]), 1.0)
        assert hz.qa_lower_bound(3, 1.0, 1.2, 1.0) == pytest.approx(14.24)
        assert float(np.min(np.diag(Q))) >= 14.24

    def test_umbilic_equality(self):
        for kappa in (1.0, -0.5):
            n, alpha = 4, 1.3
            Q = hyp.q_polynomial(alpha * np.eye(n), kappa)
            expect = 2.0 * (n - 1) ** 2 * alpha * (alpha ** 2 + kappa)
            assert float(np.min(np.diag(Q))) == pytest.approx(expect)
            assert hz.qa_lower_bound(n, alpha, 1.0, kappa) == pytest.approx(
                expect)

    @pytest.mark.parametrize("sign", ["positive", "negative"])
    def test_trials_clean(self, sign):
        rep = hz.qa_bound_trials(hz.TrialConfig(trials=5000),
                                 kappa_sign=sign)
        assert rep["violations"] == 0

    def test_planted_violations_detected(self):
        rep = hz.qa_bound_trials(hz.TrialConfig(trials=2000),
                                 kappa_sign="negative", planted=True)
        assert rep["violations"] > 0


class TestSuites:
    def test_bochner_suite_small(self):
        rep = hz.bochner_suite(samples=5)
        assert rep["max_residual"] <= 1e-8
        assert rep["max_c_spread"] <= 1e-10
        assert len(rep["cases"]) == 9

    def test_divergence_suite(self):
        rep = hz.divergence_suite(samples=6)
        assert rep["max_defect"] <= 1e-8

    def test_fd_order(self):
        rep = hz.fd_order_study(samples=4)
        assert rep["observed_order"] == pytest.approx(2.0, abs=0.4)

    def test_sphere_equality_suite(self):
        rep = hz.sphere_equality_suite()
        assert rep["all_equality"]
        assert len(rep["results"]) == 7

    def test_run_suite_empty(self):
        code, summary = hz.run_suite([])
        assert code == hz.EXIT_PASS
        assert summary["suites"] == {}

    def test_run_suite_unknown_name(self):
        code, summary = hz.run_suite(["bogus"])
        assert code == hz.EXIT_CONFIG

    def test_run_suite_sphere_equality(self):
        code, summary = hz.run_suite(["sphere-equality"])
        assert code == hz.EXIT_PASS
        assert summary["pass"]

    def test_config_rejects_unknown_section(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("[nonsense]\nx = 1\n")
        code, summary = hz.run_suite(["sphere-equality"], str(p))
        assert code == hz.EXIT_CONFIG

    def test_config_overrides(self, tmp_path):
        p = tmp_path / "ok.cfg"
        p.write_text("[solver]\nseed = 7\n[suites]\ntrials = 100\n")
        cfg = hz.load_config(str(p))
        assert cfg.getint("solver", "seed") == 7
        assert cfg.getint("suites", "trials") == 100
