"""Tests for R2, multinomial likelihoods, pattern fitting, visibility and Monte Carlo bands."""

import itertools
import math

import numpy as np
import pytest

from corpuscular.ensemble import corpuscular_distribution
from models.distribution import Histogram, ModelDistribution
from models.optics_config import OpticsConfig
from models.qubit import PathQubit, TwoQubitState
from models.run_config import DLMParams
from montecarlo.sampling import sample_events
from optics.modes import fringe_intensity, fringe_period
from optics.pixels import envelope_distribution, pixel_distribution
from polarization.heralding import herald_outcomes, heralded_distribution, unheralded_distribution
from stats.bands import r2_band, r2_values
from stats.fitting import expected_counts, fit_counts, fit_pattern, residual_gradient
from stats.multinomial import (
    IndeterminateRatioError,
    log_likelihood_ratio,
    lrt_series,
    multinomial_log_pmf,
)
from stats.r2 import DegenerateHistogramError, detections_to_threshold, r2_matrix, r_squared
from stats.sources import CorpuscularSource, QMSource, fitted_reference
from stats.visibility import visibility

TOY = ModelDistribution(probs=[0.5, 0.25, 0.25])


@pytest.fixture(scope="module")
def cfg():
    return OpticsConfig()


@pytest.fixture(scope="module")
def qm_dist(cfg):
    return pixel_distribution(PathQubit.equal_superposition(), cfg)


@pytest.fixture(scope="module")
def long_run_hist(qm_dist, cfg):
    return Histogram.from_pixels(sample_events(qm_dist, 98_000, seed=21), cfg.n_pixels)


@pytest.fixture(scope="module")
def long_run_fit(long_run_hist, cfg):
    return fit_pattern(long_run_hist, cfg)


class TestRSquared:
    """Coefficient of determination against a reference pattern."""

    def test_proportional(self):
        assert r_squared(Histogram(counts=[50, 25, 25]), TOY) == pytest.approx(1.0, abs=1e-15)

    def test_hand_example(self):
        assert r_squared(Histogram(counts=[10, 6, 4]), TOY) == pytest.approx(25 / 28, abs=1e-12)

    def test_total_as_scale(self):
        value = r_squared(Histogram(counts=[8, 6, 6]), TOY, fit_intensity_only=False)
        assert value == pytest.approx(-1.25, abs=1e-12)

    def test_flat_histogram(self):
        with pytest.raises(DegenerateHistogramError):
            r_squared(Histogram(counts=[3, 3, 3]), TOY)

    def test_reference_scale_invariance(self):
        hist = Histogram(counts=[10, 6, 4])
        raw = np.array([2.0, 1.0, 1.0])
        assert r_squared(hist, raw) == pytest.approx(r_squared(hist, 7.0 * raw), abs=1e-14)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            r_squared(Histogram(counts=[1, 2]), TOY)

    def test_matrix_matches_scalar(self, qm_dist):
        rng = np.random.default_rng(0)
        pixels = rng.integers(0, 28, size=(5, 100))
        grid = [10, 40, 100]
        matrix = r2_matrix(pixels, qm_dist, grid)
        for run in range(5):
            for j, n in enumerate(grid):
                hist = Histogram.from_pixels(pixels[run, :n], 28)
                assert matrix[run, j] == pytest.approx(r_squared(hist, qm_dist), abs=1e-12)

    def test_detections_to_threshold(self):
        r2 = np.array([[0.5, 0.97, 0.9], [0.1, 0.2, 0.3], [0.99, 0.99, 0.99]])
        out = detections_to_threshold(r2, [10, 20, 30], 0.96)
        assert out[0] == 20 and out[2] == 10
        assert math.isnan(out[1])


class TestMultinomial:
    def test_hand_example(self):
        assert multinomial_log_pmf(Histogram(counts=[2, 1, 1]), TOY) == pytest.approx(math.log(0.1875), abs=1e-12)

    def test_certain_outcome(self):
        certain = ModelDistribution(probs=[0.0, 1.0, 0.0])
        assert multinomial_log_pmf(Histogram(counts=[0, 9, 0]), certain) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_exhaustive_normalization(self, n):
        total = 0.0
        for k0, k1 in itertools.product(range(n + 1), repeat=2):
            if k0 + k1 <= n:
                total += math.exp(multinomial_log_pmf(Histogram(counts=[k0, k1, n - k0 - k1]), TOY))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_zero_probability_pixel(self):
        model = ModelDistribution(probs=[0.5, 0.5, 0.0])
        assert multinomial_log_pmf(Histogram(counts=[1, 1, 1]), model) == -math.inf

    def test_ratio_identities(self, qm_dist, cfg):
        hist = Histogram.from_pixels(sample_events(qm_dist, 500, seed=3), cfg.n_pixels)
        env = envelope_distribution(cfg)
        assert log_likelihood_ratio(hist, qm_dist, qm_dist) == 0.0
        assert log_likelihood_ratio(hist, qm_dist, env) == -log_likelihood_ratio(hist, env, qm_dist)

    def test_data_favours_its_source(self, qm_dist, cfg):
        hist = Histogram.from_pixels(sample_events(qm_dist, 2000, seed=4), cfg.n_pixels)
        assert log_likelihood_ratio(hist, qm_dist, envelope_distribution(cfg)) > 0

    def test_one_sided_infinity(self):
        impossible = ModelDistribution(probs=[0.5, 0.5, 0.0])
        assert log_likelihood_ratio(Histogram(counts=[1, 1, 1]), TOY, impossible) == math.inf

    def test_indeterminate(self):
        a = ModelDistribution(probs=[1.0, 0.0, 0.0])
        b = ModelDistribution(probs=[0.0, 1.0, 0.0])
        with pytest.raises(IndeterminateRatioError):
            log_likelihood_ratio(Histogram(counts=[0, 0, 2]), a, b)

    def test_series_rows(self, qm_dist, cfg):
        pixels = sample_events(qm_dist, 200, seed=5)
        env = envelope_distribution(cfg)
        rows = lrt_series(pixels, qm_dist, {50: env, 100: env, 200: env}, [50, 100, 200])
        assert [r.n for r in rows] == [50, 100, 200]
        for row in rows:
            assert row.log_lambda == pytest.approx(row.log_p_m1 - row.log_p_m2)

    def test_series_needs_enough_events(self, qm_dist):
        with pytest.raises(ValueError):
            lrt_series([0, 1, 2], qm_dist, {5: qm_dist}, [5])


class TestFitPattern:
    TRUTH = (5.0e4, 2.0e-5, 1.05, 1.0, 0.8)

    def test_self_fit_recovers_parameters(self, cfg):
        fit = fit_counts(expected_counts(self.TRUTH, cfg), cfg)
        np.testing.assert_allclose(fit.as_vector(), self.TRUTH, rtol=1e-6)
        assert fit.r_squared >= 1.0 - 1e-10
        assert fit.converged

    def test_long_run_quality(self, long_run_fit):
        assert long_run_fit.r_squared >= 0.99
        assert long_run_fit.fringe_visibility == pytest.approx(0.93, abs=0.02)

    def test_optimum_is_stationary(self, long_run_fit, long_run_hist, cfg):
        gradient = residual_gradient(long_run_fit, long_run_hist.counts, cfg)
        assert np.max(np.abs(gradient)) <= 1e-6

    def test_refit_is_idempotent(self, long_run_fit, cfg):
        refit = fit_counts(long_run_fit.expected_counts, cfg)
        assert refit.intensity == pytest.approx(long_run_fit.intensity, rel=1e-9)
        assert refit.shift == pytest.approx(long_run_fit.shift, abs=1e-9 * cfg.pitch_m)
        assert refit.magnification == pytest.approx(long_run_fit.magnification, rel=1e-9)
        assert refit.fringe_visibility == pytest.approx(long_run_fit.fringe_visibility, abs=1e-9)
        delta = (refit.fringe_phase - long_run_fit.fringe_phase + math.pi) % (2 * math.pi) - math.pi
        assert abs(delta) <= 1e-9

    def test_fitted_distribution_close_to_source(self, long_run_fit, qm_dist, cfg):
        assert long_run_fit.distribution(cfg).total_variation(qm_dist) < 0.01

    def test_needs_fifty_counts(self, cfg):
        counts = np.zeros(28, dtype=int)
        counts[10] = 49
        with pytest.raises(DegenerateHistogramError):
            fit_pattern(Histogram(counts=counts), cfg)

    def test_qubit_guided_start(self, qm_dist, cfg):
        hist = Histogram.from_pixels(sample_events(qm_dist, 2000, seed=6), cfg.n_pixels)
        guided = fit_pattern(hist, cfg, qubit=PathQubit.equal_superposition())
        blind = fit_pattern(hist, cfg)
        assert guided.r_squared >= blind.r_squared - 1e-9


class TestVisibility:
    def test_full_coherence(self):
        cfg = OpticsConfig(coherence_mu=1.0)
        dist = pixel_distribution(PathQubit.equal_superposition(), cfg)
        estimate = visibility(fit_counts(1e6 * dist.probs, cfg), cfg, resamples=20, seed=1)
        assert estimate.value == pytest.approx(1.0, abs=1e-6)
        assert estimate.sigma < 0.01

    def test_single_slit(self, cfg):
        dist = pixel_distribution(PathQubit.from_amplitudes(1.0, 0.0), cfg)
        assert fit_counts(1e6 * dist.probs, cfg).fringe_visibility == pytest.approx(0.0, abs=1e-6)

    def test_envelope_falloff_is_not_visibility(self, cfg):
        fit = fit_counts(1e6 * pixel_distribution(PathQubit.from_amplitudes(1.0, 0.0), cfg).probs, cfg)
        x = np.linspace(-0.5, 0.5, 401) * fringe_period(cfg)
        intensity = fringe_intensity(x, fit.fringe_visibility, fit.fringe_phase, cfg)
        envelope_ratio = (intensity.max() - intensity.min()) / (intensity.max() + intensity.min())
        assert envelope_ratio > 0.2
        assert fit.fringe_visibility < 1e-6

    def test_sampled_visibility_within_error_bar(self, qm_dist, cfg):
        hist = Histogram.from_pixels(sample_events(qm_dist, 2000, seed=7), cfg.n_pixels)
        estimate = visibility(fit_pattern(hist, cfg), cfg, resamples=50, seed=7)
        assert 0.0 < estimate.sigma < 0.1
        assert abs(estimate.value - 0.93) <= 4 * estimate.sigma

    def test_bootstrap_deterministic(self, long_run_fit, cfg):
        a = visibility(long_run_fit, cfg, resamples=5, seed=2)
        b = visibility(long_run_fit, cfg, resamples=5, seed=2)
        assert a == b

    def test_heralded_phases_complementary(self, cfg):
        d1, d2 = herald_outcomes(TwoQubitState(werner_v=1.0), 0.0)
        fit1 = fit_counts(1e6 * heralded_distribution(d1, cfg).probs, cfg)
        fit2 = fit_counts(1e6 * heralded_distribution(d2, cfg).probs, cfg)
        assert (fit2.fringe_phase - fit1.fringe_phase) % (2 * math.pi) == pytest.approx(math.pi, abs=1e-9)

    def test_unheralded_has_no_visibility(self, cfg):
        dist = unheralded_distribution(TwoQubitState(werner_v=0.92), cfg)
        assert fit_counts(1e6 * dist.probs, cfg).fringe_visibility < 0.02


class TestR2Band:
    GRID = [20, 50, 100, 200, 400, 800]

    def test_quartiles_ordered_and_rising(self, qm_dist):
        band = r2_band(QMSource(qm_dist), self.GRID, runs=200, seed=1, reference=qm_dist)
        assert band.model == "qm"
        assert all(a <= b <= c for a, b, c in zip(band.q25, band.q50, band.q75))
        assert all(b >= a for a, b in zip(band.q50, band.q50[1:]))
        assert band.q25[-1] > band.q25[0]

    def test_independent_of_worker_count(self, qm_dist):
        source = QMSource(qm_dist)
        one = r2_values(source, [10, 50], 120, seed=2, reference=qm_dist, chunk_runs=40, workers=1)
        two = r2_values(source, [10, 50], 120, seed=2, reference=qm_dist, chunk_runs=40, workers=2)
        np.testing.assert_array_equal(one, two)

    def test_needs_hundred_runs(self, qm_dist):
        with pytest.raises(ValueError):
            r2_band(QMSource(qm_dist), [10], runs=99, seed=1, reference=qm_dist)

    def test_qm_crossing_against_fitted_reference(self, qm_dist, cfg):
        reference, _ = fitted_reference(qm_dist, cfg, 98_000, seed=3)
        band = r2_band(QMSource(qm_dist), list(range(10, 301, 10)), runs=1000, seed=3, reference=reference)
        assert band.crossing_median is not None
        assert band.crossing_median <= 260

    def test_corpuscular_band_below_qm(self, qm_dist, cfg):
        grid = [100, 200]
        qm = r2_band(QMSource(qm_dist), grid, runs=100, seed=4, reference=qm_dist)
        corp = r2_band(CorpuscularSource(DLMParams(), cfg), grid, runs=100, seed=4, reference=qm_dist)
        assert corp.model == "corpuscular"
        assert corp.q75[1] < qm.q25[1]

    def test_corpuscular_needs_three_times_more_detections(self, qm_dist, cfg):
        grid = list(range(10, 4001, 10))
        qm = r2_band(QMSource(qm_dist), grid, runs=100, seed=5, reference=qm_dist)
        corp = r2_band(CorpuscularSource(DLMParams(), cfg), grid, runs=100, seed=5, reference=qm_dist)
        assert qm.crossing_median is not None
        assert corp.crossing_median is not None
        assert corp.crossing_median >= 3 * qm.crossing_median


class TestLikelihoodRatio:
    def test_qm_data_favours_qm_at_every_n(self, qm_dist, cfg):
        grid = list(range(50, 2001, 50))
        reference, _ = fitted_reference(qm_dist, cfg, 98_000, seed=11)
        m2_by_n = corpuscular_distribution(1000, grid, DLMParams(), cfg, seed=12, chunk_runs=500)
        rows = lrt_series(sample_events(qm_dist, 2000, seed=13), reference, m2_by_n, grid)
        assert all(row.log_lambda > 0 for row in rows)
