import numpy as np
import pytest

from roughscale.errors import NumericError
from roughscale.finite_sample import relative_error
from roughscale.scaling import (AnsatzFit, FrequencySweep, divisors_of_1440,
                                fit_ansatz, predict_h)

DIVISORS = divisors_of_1440()


def exact_sweep(h0, a, deltas=None, stderr=None):
    deltas = np.array(DIVISORS if deltas is None else deltas)
    n = 1440.0 / deltas
    return FrequencySweep(deltas=deltas, h2=h0 * n / (n + a), h2_stderr=stderr)


class TestDivisors:
    def test_count_and_bounds(self):
        assert len(DIVISORS) == 36
        assert DIVISORS[0] == 1 and DIVISORS[-1] == 1440


class TestFitAnsatz:
    def test_exact_model_recovery(self):
        fit = fit_ansatz(exact_sweep(0.13, 3.0))
        assert fit.h0 == pytest.approx(0.13, abs=1e-6)
        assert fit.a == pytest.approx(3.0, abs=1e-6)
        assert fit.residual_rms < 1e-10
        assert not fit.boundary_warning

    @pytest.mark.parametrize("h0,a", [(0.5, 0.7), (0.12, 16.0), (0.9, 1.0)])
    def test_recovery_across_parameter_range(self, h0, a):
        fit = fit_ansatz(exact_sweep(h0, a))
        assert fit.h0 == pytest.approx(h0, abs=1e-6)
        assert fit.a == pytest.approx(a, abs=1e-5)

    def test_exclusion_respected(self):
        sweep = exact_sweep(0.13, 3.0)
        h2 = sweep.h2.copy()
        h2[0] += 0.05  # corrupt the 1-minute point
        corrupted = FrequencySweep(deltas=sweep.deltas, h2=h2)
        fit = fit_ansatz(corrupted, exclude=[1])
        assert fit.excluded_deltas == [1]
        assert fit.h0 == pytest.approx(0.13, abs=1e-6)
        assert fit.a == pytest.approx(3.0, abs=1e-5)

    def test_noisy_coverage(self):
        truth = (0.13, 3.0)
        hits = 0
        for seed in range(30):
            rng = np.random.default_rng(seed)
            sweep = exact_sweep(*truth)
            noisy = FrequencySweep(deltas=sweep.deltas,
                                   h2=sweep.h2 + rng.normal(0, 0.002, len(sweep.h2)))
            fit = fit_ansatz(noisy)
            ok = (abs(fit.h0 - truth[0]) <= 3 * fit.h0_stderr
                  and abs(fit.a - truth[1]) <= 3 * fit.a_stderr)
            hits += ok
        assert hits >= 28

    def test_weighted_fit_uses_stderrs(self):
        sweep = exact_sweep(0.13, 3.0, stderr=np.full(36, 0.001))
        fit = fit_ansatz(sweep)  # stderrs present -> weighted by default
        assert fit.h0 == pytest.approx(0.13, abs=1e-6)

    def test_too_few_points(self):
        with pytest.raises(NumericError):
            fit_ansatz(exact_sweep(0.13, 3.0, deltas=[5, 10]))

    def test_nonpositive_h2_rejected(self):
        sweep = FrequencySweep(deltas=np.array([1, 5, 10, 60]),
                               h2=np.array([0.1, -0.1, 0.1, 0.1]))
        with pytest.raises(NumericError):
            fit_ansatz(sweep)


class TestPredict:
    def test_reference_fit_at_five_minutes(self):
        fit = AnsatzFit(h0=0.1308, a=3.02, h0_stderr=0.0, a_stderr=0.0,
                        residual_rms=0.0)
        assert predict_h(fit, 5) == pytest.approx(0.12944, abs=1e-5)

    def test_degenerate_a_zero(self):
        fit = AnsatzFit(h0=0.2, a=0.0, h0_stderr=0.0, a_stderr=0.0,
                        residual_rms=0.0)
        for d in (1, 5, 1440):
            assert predict_h(fit, d) == pytest.approx(0.2)

    def test_daily_sampling(self):
        fit = AnsatzFit(h0=0.1308, a=3.02, h0_stderr=0.0, a_stderr=0.0,
                        residual_rms=0.0)
        assert predict_h(fit, 1440) == pytest.approx(0.1308 / 4.02)

    def test_strictly_decreasing_in_delta(self):
        fit = AnsatzFit(h0=0.1308, a=3.02, h0_stderr=0.0, a_stderr=0.0,
                        residual_rms=0.0)
        values = [predict_h(fit, d) for d in DIVISORS]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_relative_error_consistency(self):
        fit = AnsatzFit(h0=0.1308, a=3.02, h0_stderr=0.0, a_stderr=0.0,
                        residual_rms=0.0)
        for d in DIVISORS:
            n = 1440 // d
            rel = (predict_h(fit, d) - fit.h0) / fit.h0
            assert -rel == pytest.approx(relative_error(n, fit.a), abs=1e-12)

    def test_delta_must_divide(self):
        fit = AnsatzFit(h0=0.1, a=1.0, h0_stderr=0.0, a_stderr=0.0,
                        residual_rms=0.0)
        with pytest.raises(ValueError):
            predict_h(fit, 7)
