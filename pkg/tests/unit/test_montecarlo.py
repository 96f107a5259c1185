"""Tests for seeding, pixel sampling, time-tag synthesis and coincidence filtering."""

import math

import numpy as np
import pytest
from scipy import stats

from models.distribution import ModelDistribution
from models.events import KINDS, EventStream
from models.optics_config import OpticsConfig
from models.qubit import PathQubit
from models.run_config import RateConfig
from montecarlo.coincidence import UnsortedStreamError, coincidence_filter, herald_stream
from montecarlo.sampling import sample_events
from montecarlo.seeding import SeedStream, derive_seed, splitmix64
from montecarlo.timeline import accidental_herald_probability, jitter_sigma_ps, timeline
from optics.pixels import pixel_distribution


@pytest.fixture
def qm_dist():
    return pixel_distribution(PathQubit.equal_superposition(), OpticsConfig())


class TestSeeding:
    """SplitMix64 substreams."""

    def test_splitmix_reference_value(self):
        # first output of the reference SplitMix64 generator seeded with 0
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    def test_deterministic(self):
        assert derive_seed(7, "timeline", 3) == derive_seed(7, "timeline", 3)

    def test_purposes_and_indices_differ(self):
        seeds = {derive_seed(7, p, i) for p in ("a", "b", "c") for i in range(50)}
        assert len(seeds) == 150

    def test_new_consumer_does_not_perturb_existing(self):
        stream = SeedStream(42)
        before = stream.generator("darks").random(5)
        stream.generator("something_new").random(100)
        after = SeedStream(42).generator("darks").random(5)
        np.testing.assert_array_equal(before, after)

    def test_rejects_negative_seed(self):
        with pytest.raises(ValueError):
            SeedStream(-1)


class TestSampleEvents:
    def test_point_mass(self):
        probs = np.zeros(28)
        probs[5] = 1.0
        draws = sample_events(ModelDistribution(probs=probs), 1000, seed=1)
        assert np.all(draws == 5)

    def test_uniform_counts(self):
        n = 280_000
        draws = sample_events(ModelDistribution.uniform(28), n, seed=2)
        counts = np.bincount(draws, minlength=28)
        sigma = math.sqrt(n * (1 / 28) * (27 / 28))
        assert np.all(np.abs(counts - 10_000) <= 4 * sigma)

    def test_goodness_of_fit(self, qm_dist):
        n = 100_000
        counts = np.bincount(sample_events(qm_dist, n, seed=3), minlength=28)
        _, p_value = stats.chisquare(counts, n * qm_dist.probs)
        assert p_value > 0.001

    def test_deterministic(self, qm_dist):
        np.testing.assert_array_equal(sample_events(qm_dist, 500, 9), sample_events(qm_dist, 500, 9))

    def test_zero_draws(self, qm_dist):
        assert sample_events(qm_dist, 0, 1).size == 0


class TestTimeline:
    def test_no_darks_keeps_every_photon(self):
        rates = RateConfig(dark_rate_hz_per_pixel=0.0)
        stream = timeline(np.arange(28).repeat(10), rates, seed=4)
        assert len(stream) == 280
        assert np.all(stream.kind == KINDS.index("signal"))

    def test_sorted_and_deterministic(self):
        pixels = np.random.default_rng(0).integers(0, 28, 5000)
        first = timeline(pixels, RateConfig(), seed=5, herald_ports="D1")
        second = timeline(pixels, RateConfig(), seed=5, herald_ports="D1")
        assert first.is_sorted()
        assert first.same_as(second)

    def test_last_arrival_matches_erlang(self):
        rates = RateConfig(dark_rate_hz_per_pixel=0.0, jitter_fwhm_ps=0.0)
        stream = timeline(np.zeros(2000, dtype=int), rates, seed=6)
        last_s = stream.time_ps[-1] / 1e12
        assert abs(last_s - 1.0) <= 3 * math.sqrt(2000) / 2000

    def test_dark_fraction(self):
        n = 120_000
        stream = timeline(np.full(n, 14), RateConfig(), seed=7)
        dark_fraction = np.mean(stream.kind == KINDS.index("dark"))
        expected = 28 * 100 / (28 * 100 + 2000)
        assert dark_fraction == pytest.approx(expected, abs=0.005)

    def test_herald_events_per_pair(self):
        rates = RateConfig(dark_rate_hz_per_pixel=0.0)
        stream = timeline(np.arange(10), rates, seed=8, herald_ports=["D1", "D2"] * 5)
        array_events, herald_events = stream.split()
        assert len(array_events) == 10
        assert sorted(herald_events.channel.tolist()) == [28] * 5 + [29] * 5

    def test_efficiency_mask_thins_signal(self):
        mask = [1.0] * 28
        mask[3] = 0.0
        rates = RateConfig(dark_rate_hz_per_pixel=0.0, efficiency_mask=mask)
        stream = timeline(np.array([3] * 50 + [4] * 50), rates, seed=9)
        assert len(stream) == 50
        assert np.all(stream.channel == 4)

    def test_jitter_sigma(self):
        assert jitter_sigma_ps(RateConfig()) == pytest.approx(150 / 2.3548, rel=1e-4)

    def test_rejects_out_of_range_pixel(self):
        with pytest.raises(ValueError):
            timeline([28], RateConfig(), seed=1)


def _stream(times, channels):
    return EventStream(time_ps=times, channel=channels)


class TestCoincidenceFilter:
    def test_inside_window(self):
        result = coincidence_filter(_stream([100_000], [3]), _stream([100_300], [28]), 1000)
        assert result.n_pairs == 1
        assert result.heralded.herald.tolist() == [0]

    def test_outside_window(self):
        result = coincidence_filter(_stream([100_000], [3]), _stream([102_000], [28]), 1000)
        assert result.n_pairs == 0
        assert result.n_unmatched_array == 1
        assert result.n_unmatched_herald == 1

    def test_each_herald_used_once(self):
        signal = _stream([1000, 1100], [1, 2])
        herald = _stream([1050], [29])
        result = coincidence_filter(signal, herald, 1000)
        assert result.n_pairs == 1
        assert result.heralded.channel.tolist() == [1]
        assert result.heralded.herald.tolist() == [1]

    def test_nearest_herald_wins(self):
        signal = _stream([1000], [1])
        herald = _stream([700, 950], [28, 29])
        result = coincidence_filter(signal, herald, 1000)
        assert result.heralded.herald.tolist() == [1]

    def test_rejects_unsorted(self):
        with pytest.raises(UnsortedStreamError):
            coincidence_filter(_stream([200, 100], [1, 2]), _stream([150], [28]), 1000)

    def test_conservation(self):
        pixels = np.random.default_rng(1).integers(0, 28, 3000)
        stream = timeline(pixels, RateConfig(), seed=10, herald_ports="D2")
        array_events, herald_events = stream.split()
        result = coincidence_filter(array_events, herald_events, 1000)
        total = len(array_events) + len(herald_events)
        assert 2 * result.n_pairs + result.n_unmatched_array + result.n_unmatched_herald == total

    def test_sixty_second_rates(self, qm_dist):
        n = 120_000
        rates = RateConfig()
        pixels = sample_events(qm_dist, n, seed=11)
        stream = timeline(pixels, rates, seed=11, herald_ports="D1")
        duration = stream.time_ps[-1] / 1e12
        result = herald_stream(stream, rates.coincidence_window_ps)

        true_pairs = result.n_pairs - result.accidental_pairs()
        assert abs(true_pairs / duration - 2000) <= 3 * math.sqrt(n) / duration

        n_dark = int(np.sum(stream.split()[0].kind == KINDS.index("dark")))
        expected = n_dark * accidental_herald_probability(rates)
        assert expected / duration == pytest.approx(5.0, abs=0.5)
        assert abs(result.accidental_pairs() - expected) <= 3 * math.sqrt(expected)
