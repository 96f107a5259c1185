"""Event sources for Monte Carlo bands: i.i.d. wave-model sampling or corpuscular runs."""

from typing import Protocol

import numpy as np

from corpuscular.ensemble import DEFAULT_MAX_MESSENGERS_PER_CLICK, DLMEnsemble
from corpuscular.messenger import Emission
from models.distribution import Histogram, ModelDistribution
from models.fit_result import FitResult
from models.optics_config import OpticsConfig
from models.run_config import DLMParams
from montecarlo.sampling import sample_pixels, sample_runs
from montecarlo.seeding import generator
from stats.fitting import fit_pattern
from utils.logger import get_logger, log_execution_time

logger = get_logger()


class EventSource(Protocol):
    """Produces independent runs of pixel events, chunk by chunk.

    Chunk ``c`` of a seed always yields the same runs, whoever computes it.
    """

    name: str

    def sample_chunk(self, chunk: int, runs: int, n_max: int, seed: int) -> np.ndarray:
        """(runs, n_max) pixel indices."""
        ...


class QMSource:
    """I.i.d. detections from a fixed pixel distribution."""

    name = "qm"

    def __init__(self, dist: ModelDistribution):
        self.dist = dist

    def sample_chunk(self, chunk: int, runs: int, n_max: int, seed: int) -> np.ndarray:
        return sample_runs(self.dist, runs, n_max, generator(seed, "qm_runs", chunk))


class CorpuscularSource:
    """Clicks of independent DLM detector arrays."""

    name = "corpuscular"

    def __init__(
        self,
        params: DLMParams,
        geometry: OpticsConfig,
        emission: Emission = "envelope",
        max_messengers_per_click: int = DEFAULT_MAX_MESSENGERS_PER_CLICK,
    ):
        self.params = params
        self.geometry = geometry
        self.emission = emission
        self.max_messengers_per_click = max_messengers_per_click

    def sample_chunk(self, chunk: int, runs: int, n_max: int, seed: int) -> np.ndarray:
        ensemble = DLMEnsemble(runs, self.geometry, self.params, self.emission, self.max_messengers_per_click)
        return ensemble.run(n_max, generator(seed, "corpuscular_ensemble", chunk)).astype(np.int64)


def fitted_reference(
    dist: ModelDistribution, cfg: OpticsConfig, n_photons: int, seed: int, starts: int = 8
) -> tuple[ModelDistribution, FitResult]:
    """Fit ``n_photons`` events sampled from ``dist``; the fitted pattern is the R2 reference."""
    pixels = sample_pixels(dist, n_photons, generator(seed, "reference"))
    with log_execution_time(logger, "fitted_reference"):
        fit = fit_pattern(Histogram.from_pixels(pixels, cfg.n_pixels), cfg, starts=starts)
    logger.info(
        "Reference pattern fitted",
        extra={"n_photons": n_photons, "r_squared": fit.r_squared, "visibility": fit.fringe_visibility},
    )
    return fit.distribution(cfg), fit
