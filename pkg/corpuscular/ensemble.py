"""Many independent corpuscular runs stepped together, and their per-N statistics."""

from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from corpuscular.dlm import update_rows
from corpuscular.messenger import Emission, messenger_phase_table, propagate_messengers
from models.distribution import Histogram, ModelDistribution
from models.dlm_state import DLMState
from models.optics_config import OpticsConfig
from models.run_config import CorpuscularConfig, DLMParams
from montecarlo.seeding import generator
from utils.logger import get_logger, log_execution_time
from utils.parallel import run_indexed

logger = get_logger()

DEFAULT_MAX_MESSENGERS_PER_CLICK = 10_000


class CorpuscularRun(BaseModel):
    """Outcome of one corpuscular simulation."""

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    pixels: np.ndarray
    histogram: Histogram
    state: DLMState
    n_messengers: int


class DLMEnsemble:
    """``runs`` independent DLM detector arrays fed by their own messenger streams."""

    def __init__(
        self,
        runs: int,
        geometry: OpticsConfig,
        params: DLMParams,
        emission: Emission = "envelope",
        max_messengers_per_click: int = DEFAULT_MAX_MESSENGERS_PER_CLICK,
    ):
        if runs < 1:
            raise ValueError(f"runs must be >= 1, got {runs}")
        self.runs = runs
        self.geometry = geometry
        self.params = params
        self.emission = emission
        self.max_messengers_per_click = max_messengers_per_click
        self.p = np.zeros((runs, geometry.n_pixels, 2))
        self.w = np.ones((runs, geometry.n_pixels))
        self.messengers = np.zeros(runs, dtype=np.int64)
        self._phases = messenger_phase_table(geometry)

    def run(self, n_clicks: int, rng: np.random.Generator) -> np.ndarray:
        """Feed messengers until every run has ``n_clicks`` clicks.

        Returns:
            (runs, n_clicks) pixel indices of the clicks in order.

        Raises:
            RuntimeError: if a run needs more than max_messengers_per_click
                messengers per requested click.
        """
        clicks = np.zeros((self.runs, n_clicks), dtype=np.int16)
        counts = np.zeros(self.runs, dtype=np.int64)
        limit = self.max_messengers_per_click * max(n_clicks, 1)
        active = np.arange(self.runs) if n_clicks > 0 else np.zeros(0, dtype=np.int64)

        while active.size:
            _, pixels, phases = propagate_messengers(
                rng, self.geometry, active.size, self.emission, self._phases
            )
            p_new, w_new = update_rows(
                self.p[active, pixels], self.w[active, pixels], phases, self.params.kappa, self.params.gamma
            )
            self.p[active, pixels] = p_new
            self.w[active, pixels] = w_new
            self.messengers[active] += 1

            fired = rng.random(active.size) < np.einsum("ij,ij->i", p_new, p_new)
            hit_runs = active[fired]
            clicks[hit_runs, counts[hit_runs]] = pixels[fired]
            counts[hit_runs] += 1

            if self.messengers[active].max() > limit:
                raise RuntimeError(
                    f"a corpuscular run consumed more than {limit} messengers for {n_clicks} clicks"
                )
            active = active[counts[active] < n_clicks]
        return clicks

    def state(self, run: int) -> DLMState:
        return DLMState(p=self.p[run].copy(), w=self.w[run].copy())


def simulate_corpuscular(
    n_photons: int,
    params: DLMParams,
    geometry: OpticsConfig,
    seed: int,
    emission: Emission = "envelope",
    max_messengers_per_click: int = DEFAULT_MAX_MESSENGERS_PER_CLICK,
) -> CorpuscularRun:
    """One corpuscular buildup of ``n_photons`` clicks; deterministic given ``seed``."""
    if n_photons < 0:
        raise ValueError(f"n_photons must be non-negative, got {n_photons}")
    ensemble = DLMEnsemble(1, geometry, params, emission, max_messengers_per_click)
    pixels = ensemble.run(n_photons, generator(seed, "corpuscular")).astype(np.int64)[0]
    state = ensemble.state(0).model_copy(update={"clicks": n_photons})
    return CorpuscularRun(
        pixels=pixels,
        histogram=Histogram.from_pixels(pixels, geometry.n_pixels),
        state=state,
        n_messengers=int(ensemble.messengers[0]),
    )


def _ensemble_chunk(
    chunk: int,
    runs: int,
    n_clicks: int,
    params: DLMParams,
    geometry: OpticsConfig,
    seed: int,
    emission: Emission,
    max_messengers_per_click: int,
) -> np.ndarray:
    ensemble = DLMEnsemble(runs, geometry, params, emission, max_messengers_per_click)
    return ensemble.run(n_clicks, generator(seed, "corpuscular_ensemble", chunk))


def chunk_sizes(runs: int, chunk_runs: int) -> list[int]:
    full, rest = divmod(runs, chunk_runs)
    return [chunk_runs] * full + ([rest] if rest else [])


def ensemble_clicks(
    runs: int,
    n_clicks: int,
    params: DLMParams,
    geometry: OpticsConfig,
    seed: int,
    emission: Emission = "envelope",
    chunk_runs: int = 1000,
    workers: int = 1,
    max_messengers_per_click: int = DEFAULT_MAX_MESSENGERS_PER_CLICK,
    first_run: int = 0,
) -> np.ndarray:
    """(runs, n_clicks) click pixels of an ensemble, identical for any ``workers``.

    Runs are cut into chunks of ``chunk_runs``; chunk ``c`` draws from its own
    substream, so the output depends only on the seed and the chunk size.
    ``first_run`` must be a multiple of ``chunk_runs`` and selects where in
    the seed layout the ensemble starts.
    """
    if first_run % chunk_runs:
        raise ValueError("first_run must be a multiple of chunk_runs")
    sizes = chunk_sizes(runs, chunk_runs)
    offset = first_run // chunk_runs
    tasks = [
        (offset + c, size, n_clicks, params, geometry, seed, emission, max_messengers_per_click)
        for c, size in enumerate(sizes)
    ]
    parts = run_indexed(_ensemble_chunk, tasks, workers)
    if not parts:
        return np.zeros((0, n_clicks), dtype=np.int16)
    return np.concatenate(parts, axis=0)


def nth_click_distributions(clicks: np.ndarray, n_grid: Sequence[int], n_pixels: int) -> dict[int, ModelDistribution]:
    """Add-one smoothed frequency of the N-th click pixel over runs, per N (1-based)."""
    runs = clicks.shape[0]
    result = {}
    for n in n_grid:
        if not 1 <= n <= clicks.shape[1]:
            raise ValueError(f"N={n} outside 1..{clicks.shape[1]}")
        counts = np.bincount(clicks[:, n - 1].astype(np.int64), minlength=n_pixels)
        result[int(n)] = ModelDistribution.from_weights((counts + 1.0) / (runs + n_pixels))
    return result


def corpuscular_distribution(
    runs: int,
    n_grid: Sequence[int],
    params: DLMParams,
    geometry: OpticsConfig,
    seed: int,
    emission: Emission = "envelope",
    chunk_runs: int = 1000,
    workers: int = 1,
    max_messengers_per_click: Optional[int] = None,
) -> dict[int, ModelDistribution]:
    """Per-N pixel distribution of the N-th corpuscular click, estimated over ``runs`` runs.

    Args:
        runs: Ensemble size.
        n_grid: Click numbers N (1-based) to report.
        params: DLM constants.
        geometry: Optics and array geometry.
        seed: Master seed.
        emission: Messenger direction profile.
        chunk_runs: Runs per worker task.
        workers: Worker processes; the result does not depend on it.
        max_messengers_per_click: Runaway guard.

    Returns:
        Mapping N -> add-one smoothed ModelDistribution.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    n_grid = sorted(set(int(n) for n in n_grid))
    if not n_grid:
        return {}
    with log_execution_time(logger, "corpuscular_distribution"):
        clicks = ensemble_clicks(
            runs,
            n_grid[-1],
            params,
            geometry,
            seed,
            emission,
            chunk_runs,
            workers,
            max_messengers_per_click or DEFAULT_MAX_MESSENGERS_PER_CLICK,
        )
    return nth_click_distributions(clicks, n_grid, geometry.n_pixels)


def corpuscular_distribution_from_config(
    config: CorpuscularConfig, n_grid: Sequence[int], geometry: OpticsConfig, seed: int, workers: int = 1
) -> dict[int, ModelDistribution]:
    return corpuscular_distribution(
        config.ensemble_runs,
        n_grid,
        config.dlm_params(),
        geometry,
        seed,
        config.emission,
        config.chunk_runs,
        workers,
        config.max_messengers_per_click,
    )
