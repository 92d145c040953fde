import numpy as np
import pytest

from roughscale.errors import DataError, NumericError
from roughscale.mfdfa import (FluctuationSurface, MfdfaConfig,
                              aggregate_fluctuation, default_scales,
                              fluctuation_function, generalized_hurst, profile,
                              segment_variances)
from roughscale.synthetic import cascade_hq, generate_cascade, generate_fgn


class TestProfile:
    def test_cumulative_sum(self):
        np.testing.assert_allclose(profile([1.0, -1.0]), [1.0, 0.0])

    def test_constant_series(self):
        np.testing.assert_allclose(profile([3.0] * 5), 0.0, atol=1e-12)

    def test_arithmetic(self):
        np.testing.assert_allclose(profile([1.0, 2.0, 3.0]), [-1.0, -1.0, 0.0])

    def test_last_point_vanishes(self):
        rng = np.random.default_rng(0)
        assert profile(rng.normal(size=1000))[-1] == pytest.approx(0.0, abs=1e-9)

    def test_too_short(self):
        with pytest.raises(DataError):
            profile([1.0])


class TestSegmentVariances:
    def test_linear_profile_absorbed_by_m1(self):
        Y = 2.0 * np.arange(50) + 3.0
        np.testing.assert_allclose(segment_variances(Y, 10, m=1), 0.0, atol=1e-18)

    def test_quadratic_profile_absorbed_by_m2(self):
        Y = np.arange(48, dtype=float) ** 2
        np.testing.assert_allclose(segment_variances(Y, 8, m=2), 0.0, atol=1e-12)

    def test_bidirectional_bookkeeping(self):
        # N=10, s=3: 3 forward segments on indices 0..8, 3 backward on 1..9
        Y = np.arange(10, dtype=float) ** 3
        out = segment_variances(Y, 3, m=1)
        assert out.shape == (6,)
        fwd = [np.var(np.polyval(np.polyfit(np.arange(3.0), Y[i:i + 3], 1),
                                 np.arange(3.0)) - Y[i:i + 3])
               for i in (0, 3, 6)]
        bwd = [np.var(np.polyval(np.polyfit(np.arange(3.0), Y[i:i + 3], 1),
                                 np.arange(3.0)) - Y[i:i + 3])
               for i in (1, 4, 7)]
        np.testing.assert_allclose(out, fwd + bwd, rtol=1e-8)

    def test_scale_larger_than_series(self):
        with pytest.raises(DataError):
            segment_variances(np.arange(10.0), 11)


class TestFluctuationFunction:
    def test_q2_collapses_to_rms(self):
        assert aggregate_fluctuation(np.array([4.0]), 2.0) == pytest.approx(2.0)
        f2 = np.array([1.0, 4.0, 9.0, 16.0])
        assert aggregate_fluctuation(f2, 2.0) == pytest.approx(np.sqrt(f2.mean()))

    def test_constant_segment_variances_give_sqrt_c(self):
        f2 = np.full(12, 6.25)
        for q in (-3.0, -1.0, 0.0, 0.5, 2.0, 4.0):
            assert aggregate_fluctuation(f2, q) == pytest.approx(2.5)

    def test_surface_monotone_in_q(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=256)
        config = MfdfaConfig(q_values=[-2.0, 0.0, 1.0, 2.0, 4.0], scales=[4, 8, 16])
        surface = fluctuation_function(x, config)
        assert np.all(np.diff(surface.values, axis=0) >= -1e-12)

    def test_white_noise_slope_half(self):
        rng = np.random.default_rng(2024)
        x = rng.normal(size=2 ** 16)
        config = MfdfaConfig(q_values=[2.0], scales=default_scales(len(x)))
        curve = generalized_hurst(fluctuation_function(x, config))
        assert curve.h_at(2.0) == pytest.approx(0.5, abs=0.02)

    def test_all_zero_segments_error(self):
        x = np.zeros(200)
        config = MfdfaConfig(q_values=[2.0], scales=[10, 20, 40])
        with pytest.raises(NumericError, match="s = 10"):
            fluctuation_function(x, config)

    def test_zero_segments_excluded_for_negative_q(self):
        f2 = np.array([0.0, 4.0, 0.0, 4.0])
        assert aggregate_fluctuation(f2, -2.0) == pytest.approx(2.0)
        assert aggregate_fluctuation(f2, 0.0) == pytest.approx(2.0)
        with pytest.raises(NumericError):
            aggregate_fluctuation(np.zeros(4), -2.0)

    def test_exclusion_counts_reported(self):
        # first 64 points sit exactly at the global mean (1 +- 0.25 is binary
        # exact), so their profile stretch is identically zero
        tail = np.tile([1.25, 0.75], 96)
        x = np.concatenate([np.ones(64), tail])
        config = MfdfaConfig(q_values=[-2.0, 2.0], scales=[8, 16, 32])
        surface = fluctuation_function(x, config)
        assert surface.excluded_segments.sum() > 0


class TestGeneralizedHurst:
    def test_exact_power_law(self):
        scales = np.array([10, 20, 40, 80, 160])
        config = MfdfaConfig(q_values=np.array([1.0, 2.0]), scales=scales)
        values = np.vstack([scales ** 0.3, scales ** 0.3]).astype(float)
        surface = FluctuationSurface(q_values=config.q_values, scales=scales,
                                     values=values, series_length=1000,
                                     config=config,
                                     excluded_segments=np.zeros(5, dtype=int))
        curve = generalized_hurst(surface)
        for p in curve.points:
            assert p.h == pytest.approx(0.3, abs=1e-12)
            assert p.stderr == pytest.approx(0.0, abs=1e-12)
            assert p.r2 == pytest.approx(1.0, abs=1e-12)

    def test_fgn_h03(self):
        x = generate_fgn(0.3, 2 ** 16, seed=11)
        config = MfdfaConfig(q_values=[2.0], scales=default_scales(len(x)))
        curve = generalized_hurst(fluctuation_function(x, config))
        assert curve.h_at(2.0) == pytest.approx(0.3, abs=0.03)

    def test_cascade_matches_closed_form_h2(self):
        x = generate_cascade(0.6, 16)
        scales = np.unique(np.round(np.exp(
            np.linspace(np.log(16), np.log(len(x) // 16), 20))).astype(int))
        config = MfdfaConfig(q_values=[2.0], scales=scales)
        curve = generalized_hurst(fluctuation_function(x, config))
        assert curve.h_at(2.0) == pytest.approx(cascade_hq(0.6, 2.0), abs=0.05)

    def test_too_few_scales(self):
        scales = np.array([10, 20, 40])
        config = MfdfaConfig(q_values=np.array([2.0]), scales=scales)
        surface = FluctuationSurface(q_values=config.q_values, scales=scales,
                                     values=np.array([[1.0, 2.0, 4.0]]),
                                     series_length=1000, config=config,
                                     excluded_segments=np.zeros(3, dtype=int))
        with pytest.raises(NumericError):
            generalized_hurst(surface, fit_range=(10, 20))


class TestInvariants:
    def test_affine_invariance(self):
        rng = np.random.default_rng(17)
        x = rng.normal(size=4096)
        config = MfdfaConfig(q_values=[-2.0, 0.0, 2.0], scales=default_scales(len(x)))
        base = generalized_hurst(fluctuation_function(x, config))
        moved = generalized_hurst(fluctuation_function(2.5 * x - 7.0, config))
        np.testing.assert_allclose(moved.h_values, base.h_values, atol=1e-10)

    def test_reversal_near_symmetry(self):
        # forward segmentation of the reversed profile sits one sample off the
        # backward segmentation, so agreement is approximate, not exact
        rng = np.random.default_rng(19)
        x = rng.normal(size=2 ** 13)
        config = MfdfaConfig(q_values=[2.0], scales=default_scales(len(x)))
        fwd = fluctuation_function(x, config)
        rev = fluctuation_function(x[::-1], config)
        np.testing.assert_allclose(rev.values, fwd.values, rtol=0.05)

    def test_monotonic_in_q(self):
        x = generate_fgn(0.4, 4096, seed=23)
        config = MfdfaConfig(q_values=np.arange(-6, 7) / 2.0,
                             scales=default_scales(len(x)))
        surface = fluctuation_function(x, config)
        assert np.all(np.diff(surface.values, axis=0) >= -1e-12)

    @pytest.mark.parametrize("H", [0.1, 0.5, 0.9])
    def test_monofractal_fgn_small_delta_h(self, H):
        x = generate_fgn(H, 2 ** 16, seed=31)
        config = MfdfaConfig(q_values=[-3.0, 3.0], scales=default_scales(len(x)))
        curve = generalized_hurst(fluctuation_function(x, config))
        assert curve.h_at(-3.0) - curve.h_at(3.0) <= 0.05

    def test_shuffled_fgn_loses_memory(self):
        x = generate_fgn(0.8, 2 ** 16, seed=37)
        np.random.default_rng(38).shuffle(x)
        config = MfdfaConfig(q_values=[2.0], scales=default_scales(len(x)))
        curve = generalized_hurst(fluctuation_function(x, config))
        assert curve.h_at(2.0) == pytest.approx(0.5, abs=0.03)


class TestConfigValidation:
    def test_scales_must_increase(self):
        with pytest.raises(ValueError):
            MfdfaConfig(q_values=[2.0], scales=[10, 10, 20])

    def test_scale_floor_from_detrend_order(self):
        with pytest.raises(ValueError):
            MfdfaConfig(q_values=[2.0], scales=[3, 10], detrend_order=2)

    def test_fit_range_membership(self):
        with pytest.raises(ValueError):
            MfdfaConfig(q_values=[2.0], scales=[10, 20, 40], fit_range=(10, 30))

    def test_largest_scale_versus_length(self):
        config = MfdfaConfig(q_values=[2.0], scales=[10, 20, 40])
        with pytest.raises(ValueError):
            config.validate_length(100)
