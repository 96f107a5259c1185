"""Monte Carlo R2 buildup bands."""

from typing import Sequence

import numpy as np

from corpuscular.ensemble import chunk_sizes
from models.fit_result import R2Band
from stats.r2 import Reference, detections_to_threshold, r2_matrix, reference_vector
from stats.sources import EventSource
from utils.logger import get_logger, log_execution_time
from utils.parallel import run_indexed

logger = get_logger()

MIN_BAND_RUNS = 100


def _band_chunk(
    source: EventSource,
    chunk: int,
    runs: int,
    n_grid: Sequence[int],
    seed: int,
    reference: np.ndarray,
    fit_intensity_only: bool,
) -> np.ndarray:
    pixels = source.sample_chunk(chunk, runs, n_grid[-1], seed)
    return r2_matrix(pixels, reference, n_grid, fit_intensity_only)


def r2_values(
    source: EventSource,
    n_grid: Sequence[int],
    runs: int,
    seed: int,
    reference: Reference,
    chunk_runs: int = 1000,
    workers: int = 1,
    fit_intensity_only: bool = True,
) -> np.ndarray:
    """(runs, len(n_grid)) R2 trajectories; identical for any ``workers``."""
    grid = [int(n) for n in n_grid]
    ref = reference_vector(reference)
    tasks = [
        (source, c, size, grid, seed, ref, fit_intensity_only)
        for c, size in enumerate(chunk_sizes(runs, chunk_runs))
    ]
    return np.concatenate(run_indexed(_band_chunk, tasks, workers), axis=0)


def r2_band(
    source: EventSource,
    n_grid: Sequence[int],
    runs: int,
    seed: int,
    reference: Reference,
    threshold: float = 0.96,
    chunk_runs: int = 1000,
    workers: int = 1,
    fit_intensity_only: bool = True,
) -> R2Band:
    """Per-N interquartile band of R2 against ``reference`` over ``runs`` simulated buildups.

    Args:
        source: Where the events come from (QMSource or CorpuscularSource).
        n_grid: Strictly increasing detection counts.
        runs: Number of independent buildups, at least MIN_BAND_RUNS.
        seed: Master seed.
        reference: Pattern the histograms are scored against.
        threshold: R2 level whose first crossing is summarized.
        chunk_runs: Runs per worker task.
        workers: Worker processes; the band does not depend on it.
        fit_intensity_only: Fit the intensity scale (else scale by N).

    Returns:
        R2Band with q25/q50/q75 per N and the median first crossing.
    """
    if runs < MIN_BAND_RUNS:
        raise ValueError(f"runs must be >= {MIN_BAND_RUNS}, got {runs}")
    grid = [int(n) for n in n_grid]
    with log_execution_time(logger, f"r2_band_{source.name}"):
        values = r2_values(source, grid, runs, seed, reference, chunk_runs, workers, fit_intensity_only)

    q25, q50, q75 = np.nanpercentile(values, [25, 50, 75], axis=0)
    crossings = detections_to_threshold(values, grid, threshold)
    # runs that never reach the threshold count as crossing beyond the grid
    median = float(np.median(np.nan_to_num(crossings, nan=np.inf)))
    crossing_median = median if np.isfinite(median) else None
    logger.info(
        "R2 band computed",
        extra={
            "model": source.name,
            "runs": runs,
            "n_max": grid[-1],
            "crossing_median": crossing_median,
            "runs_without_crossing": int(np.isnan(crossings).sum()),
        },
    )
    return R2Band(
        model=source.name,
        n_grid=grid,
        q25=q25.tolist(),
        q50=q50.tolist(),
        q75=q75.tolist(),
        runs=runs,
        threshold=threshold,
        crossing_median=crossing_median,
    )
