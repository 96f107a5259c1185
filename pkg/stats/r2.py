"""Coefficient of determination of count histograms against a reference pattern."""

from typing import Sequence, Union

import numpy as np

from models.distribution import Histogram, ModelDistribution

Reference = Union[ModelDistribution, np.ndarray, Sequence[float]]


class DegenerateHistogramError(ValueError):
    """The histogram has zero total variance, so R2 is undefined."""


def reference_vector(reference: Reference) -> np.ndarray:
    if isinstance(reference, ModelDistribution):
        return reference.probs
    ref = np.asarray(reference, dtype=float)
    if ref.ndim != 1 or np.any(ref < 0) or not ref.sum() > 0:
        raise ValueError("reference must be a non-negative vector with a positive sum")
    return ref / ref.sum()


def r_squared_counts(counts: np.ndarray, reference: Reference, fit_intensity_only: bool = True) -> float:
    """R2 = 1 - sum (k - c p)^2 / sum (k - mean k)^2 for real-valued counts."""
    k = np.asarray(counts, dtype=float)
    p = reference_vector(reference)
    if k.shape != p.shape:
        raise ValueError(f"histogram has {k.size} pixels, reference has {p.size}")
    total_ss = float(np.sum((k - k.mean()) ** 2))
    if total_ss == 0.0:
        raise DegenerateHistogramError("flat histogram: R2 is undefined")
    c = float(k @ p / (p @ p)) if fit_intensity_only else float(k.sum())
    return 1.0 - float(np.sum((k - c * p) ** 2)) / total_ss


def r_squared(hist: Histogram, reference: Reference, fit_intensity_only: bool = True) -> float:
    """R2 of ``hist`` against ``reference``.

    With ``fit_intensity_only`` the scale c is the least-squares intensity,
    otherwise c is the histogram total.

    Raises:
        DegenerateHistogramError: if every pixel holds the same count.
    """
    return r_squared_counts(hist.counts, reference, fit_intensity_only)


def cumulative_histograms(pixels: np.ndarray, n_grid: Sequence[int], n_pixels: int) -> np.ndarray:
    """Histograms of the first N events of each run.

    Args:
        pixels: (runs, n_max) pixel indices.
        n_grid: Increasing N values, each <= n_max.
        n_pixels: Histogram length.

    Returns:
        (len(n_grid), runs, n_pixels) integer counts.
    """
    pixels = np.atleast_2d(np.asarray(pixels, dtype=np.int64))
    runs, n_max = pixels.shape
    grid = list(n_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])) or (grid and (grid[0] < 1 or grid[-1] > n_max)):
        raise ValueError(f"n_grid must increase within 1..{n_max}")
    out = np.zeros((len(grid), runs, n_pixels), dtype=np.int64)
    counts = np.zeros((runs, n_pixels), dtype=np.int64)
    row_offset = (np.arange(runs) * n_pixels)[:, None]
    start = 0
    for j, n in enumerate(grid):
        block = pixels[:, start:n] + row_offset
        counts += np.bincount(block.ravel(), minlength=runs * n_pixels).reshape(runs, n_pixels)
        out[j] = counts
        start = n
    return out


def r2_matrix(
    pixels: np.ndarray, reference: Reference, n_grid: Sequence[int], fit_intensity_only: bool = True
) -> np.ndarray:
    """(runs, len(n_grid)) R2 of every run's cumulative histogram; NaN where a histogram is flat."""
    p = reference_vector(reference)
    hists = cumulative_histograms(pixels, n_grid, p.size).astype(float)
    if fit_intensity_only:
        scale = (hists @ p) / (p @ p)
    else:
        scale = hists.sum(axis=2)
    residual = np.sum((hists - scale[..., None] * p) ** 2, axis=2)
    total = np.sum((hists - hists.mean(axis=2, keepdims=True)) ** 2, axis=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(total > 0, 1.0 - residual / total, np.nan)
    return values.T


def detections_to_threshold(r2: np.ndarray, n_grid: Sequence[int], threshold: float) -> np.ndarray:
    """First N at which each run's R2 reaches ``threshold``; NaN if it never does."""
    r2 = np.atleast_2d(r2)
    reached = np.nan_to_num(r2, nan=-np.inf) >= threshold
    first = np.argmax(reached, axis=1)
    grid = np.asarray(n_grid, dtype=float)
    return np.where(reached.any(axis=1), grid[first], np.nan)
