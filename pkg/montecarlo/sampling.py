"""I.i.d. pixel sampling from a model distribution."""

import numpy as np

from models.distribution import ModelDistribution
from montecarlo.seeding import generator


def sample_pixels(dist: ModelDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    # cumulative search keeps point masses exact (choice() renormalizes with rounding)
    cdf = np.cumsum(dist.probs)
    cdf[-1] = 1.0
    draws = rng.random(n)
    pixels = np.searchsorted(cdf, draws, side="right")
    return np.minimum(pixels, dist.n_pixels - 1).astype(np.int64)


def sample_events(dist: ModelDistribution, n: int, seed: int) -> np.ndarray:
    """``n`` pixel indices drawn i.i.d. from ``dist``; deterministic given ``seed``."""
    return sample_pixels(dist, n, generator(seed, "sample_events"))


def sample_runs(dist: ModelDistribution, runs: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """(runs, n) independent pixel sequences."""
    return sample_pixels(dist, runs * n, rng).reshape(runs, n)
