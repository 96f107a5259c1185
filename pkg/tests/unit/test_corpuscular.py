"""Tests for messenger emission, the DLM update rule and corpuscular ensembles."""

import math

import numpy as np
import pytest
from scipy import stats

from corpuscular.dlm import click_probability, dlm_update, update_rows
from corpuscular.ensemble import (
    DLMEnsemble,
    corpuscular_distribution,
    ensemble_clicks,
    nth_click_distributions,
    simulate_corpuscular,
)
from corpuscular.messenger import (
    emission_distribution,
    messenger_phase_table,
    propagate_messenger,
    propagate_messengers,
)
from models.dlm_state import DLMState, Messenger
from models.optics_config import OpticsConfig
from models.qubit import PathQubit
from models.run_config import DLMParams
from optics.pixels import pixel_distribution
from stats.r2 import r_squared


@pytest.fixture
def geometry():
    return OpticsConfig()


@pytest.fixture
def params():
    return DLMParams()


class TestDLMUpdate:
    """Single-pixel learning rule."""

    def test_first_message_from_rest(self, params):
        state = DLMState.initial(28)
        new = dlm_update(state, Messenger(slit="+", pixel=0, phase_phi=0.0), params)
        np.testing.assert_allclose(new.p[0], [1.0, 0.0], atol=1e-15)
        assert new.w[0] == pytest.approx(0.995, abs=1e-15)
        assert click_probability(new, 0) == pytest.approx(1.0)

    def test_other_pixels_untouched(self, params):
        rng = np.random.default_rng(0)
        state = DLMState.initial(28)
        for _ in range(50):
            state = dlm_update(
                state,
                Messenger(slit="-", pixel=int(rng.integers(0, 28)), phase_phi=float(rng.uniform(0, 6))),
                params,
            )
        new = dlm_update(state, Messenger(slit="+", pixel=7, phase_phi=1.0), params)
        untouched = np.arange(28) != 7
        np.testing.assert_array_equal(new.p[untouched], state.p[untouched])
        np.testing.assert_array_equal(new.w[untouched], state.w[untouched])

    def test_state_is_immutable(self, params):
        state = DLMState.initial(4)
        dlm_update(state, Messenger(slit="+", pixel=1, phase_phi=0.3), params)
        assert np.all(state.p == 0.0)
        with pytest.raises(ValueError):
            state.p[0, 0] = 1.0

    def test_bounds_hold_under_random_messages(self):
        rng = np.random.default_rng(1)
        p = np.zeros((2000, 2))
        w = np.ones(2000)
        for _ in range(200):
            p, w = update_rows(p, w, rng.uniform(0, 2 * math.pi, 2000), 0.9, 0.95)
            assert np.all(np.linalg.norm(p, axis=1) <= 1.0 + 1e-12)
            assert np.all((w >= 0.0) & (w <= 1.0))

    def test_repeated_message_converges(self, params):
        p = np.zeros((1, 2))
        w = np.ones(1)
        phase = np.array([2.1])
        for _ in range(5000):
            p, w = update_rows(p, w, phase, params.kappa, params.gamma)
        np.testing.assert_allclose(p[0], [math.cos(2.1), math.sin(2.1)], atol=1e-6)

    def test_pixel_outside_array(self, params):
        with pytest.raises(ValueError):
            dlm_update(DLMState.initial(4), Messenger(slit="+", pixel=4, phase_phi=0.0), params)

    def test_rejects_bad_constants(self):
        with pytest.raises(ValueError):
            DLMParams(kappa=1.0)
        with pytest.raises(ValueError):
            DLMParams(gamma=0.0)


class TestMessengers:
    def test_relative_phase_slope(self, geometry):
        table = messenger_phase_table(geometry)
        relative = np.unwrap(table[0] - table[1])
        slope = 2 * math.pi * geometry.d_m * geometry.pitch_m / (geometry.wavelength_m * geometry.f_m)
        np.testing.assert_allclose(np.diff(relative), slope, rtol=1e-3)

    def test_phases_in_range(self, geometry):
        table = messenger_phase_table(geometry)
        assert table.shape == (2, 28)
        assert np.all((table >= 0) & (table < 2 * math.pi))

    def test_slits_equally_likely(self, geometry):
        n = 100_000
        slits, _, _ = propagate_messengers(np.random.default_rng(2), geometry, n)
        sigma = math.sqrt(0.25 / n)
        assert abs(slits.mean() - 0.5) <= 3 * sigma

    @pytest.mark.parametrize("emission", ["envelope", "uniform"])
    def test_emission_mirror_symmetric(self, geometry, emission):
        probs = emission_distribution(geometry, emission).probs
        np.testing.assert_allclose(probs, probs[::-1], atol=1e-12)

    @pytest.mark.parametrize("emission", ["envelope", "uniform"])
    def test_targets_follow_emission_distribution(self, geometry, emission):
        n = 200_000
        _, pixels, _ = propagate_messengers(np.random.default_rng(3), geometry, n, emission)
        expected = n * emission_distribution(geometry, emission).probs
        _, p_value = stats.chisquare(np.bincount(pixels, minlength=28), expected)
        assert p_value > 0.001

    def test_single_messenger_carries_table_phase(self, geometry):
        m = propagate_messenger(np.random.default_rng(4), geometry)
        slit = 0 if m.slit == "+" else 1
        assert m.phase_phi == pytest.approx(messenger_phase_table(geometry)[slit, m.pixel])


class TestCorpuscularRuns:
    def test_zero_photons(self, geometry, params):
        run = simulate_corpuscular(0, params, geometry, seed=1)
        assert run.histogram.total == 0
        assert run.pixels.size == 0
        assert run.n_messengers == 0

    def test_deterministic(self, geometry, params):
        a = simulate_corpuscular(200, params, geometry, seed=5)
        b = simulate_corpuscular(200, params, geometry, seed=5)
        np.testing.assert_array_equal(a.pixels, b.pixels)
        assert a.n_messengers == b.n_messengers

    def test_click_count_and_state(self, geometry, params):
        run = simulate_corpuscular(300, params, geometry, seed=6)
        assert run.histogram.total == 300
        assert run.state.clicks == 300
        assert run.n_messengers >= 300
        assert np.all(run.state.norms() <= 1.0 + 1e-12)

    def test_first_click_follows_emission(self, geometry, params):
        # the first messenger reaching a fresh pixel sets |p| = 1, so it always clicks
        clicks = ensemble_clicks(20_000, 1, params, geometry, seed=7, chunk_runs=5000)
        expected = 20_000 * emission_distribution(geometry).probs
        _, p_value = stats.chisquare(np.bincount(clicks[:, 0], minlength=28), expected)
        assert p_value > 0.001

    def test_independent_of_worker_count(self, geometry, params):
        one = ensemble_clicks(40, 5, params, geometry, seed=8, chunk_runs=10, workers=1)
        two = ensemble_clicks(40, 5, params, geometry, seed=8, chunk_runs=10, workers=2)
        np.testing.assert_array_equal(one, two)

    def test_first_run_offset_matches_full_ensemble(self, geometry, params):
        full = ensemble_clicks(30, 4, params, geometry, seed=9, chunk_runs=10)
        tail = ensemble_clicks(10, 4, params, geometry, seed=9, chunk_runs=10, first_run=20)
        np.testing.assert_array_equal(full[20:], tail)

    def test_smoothed_distributions_positive(self, geometry, params):
        dists = corpuscular_distribution(50, [1, 10, 20], params, geometry, seed=10, chunk_runs=25)
        assert sorted(dists) == [1, 10, 20]
        for dist in dists.values():
            assert np.all(dist.probs > 0)
            assert dist.probs.sum() == pytest.approx(1.0, abs=1e-12)

    def test_nth_click_smoothing(self):
        clicks = np.array([[0, 1], [0, 1], [2, 1]])
        dist = nth_click_distributions(clicks, [1], 3)[1]
        np.testing.assert_allclose(dist.probs, [3 / 6, 1 / 6, 2 / 6])

    def test_runaway_guard(self, geometry, params):
        ensemble = DLMEnsemble(1, geometry, params, max_messengers_per_click=1)
        with pytest.raises(RuntimeError):
            ensemble.run(2000, np.random.default_rng(11))


class TestApproachToWavePattern:
    """Long corpuscular runs reproduce the fringe pattern."""

    @pytest.fixture(scope="class")
    def wave_pattern(self):
        return pixel_distribution(PathQubit.equal_superposition(), OpticsConfig())

    @pytest.mark.parametrize("seed", [1, 2])
    def test_ten_thousand_clicks_fit_the_fringes(self, geometry, params, wave_pattern, seed):
        run = simulate_corpuscular(10_000, params, geometry, seed=seed)
        assert r_squared(run.histogram, wave_pattern) >= 0.95

    def test_distance_to_wave_pattern_shrinks_with_n(self, geometry, params, wave_pattern):
        grid = [20, 200, 2000]
        dists = corpuscular_distribution(4000, grid, params, geometry, seed=13, chunk_runs=1000)
        distance = [0.5 * np.abs(dists[n].probs - wave_pattern.probs).sum() for n in grid]
        assert distance[0] > distance[1] > distance[2]
