"""Least-squares fit of the pixel-integrated fringe model to a count histogram.

Model counts: intensity x ((1 - dark) s_i / sum s + dark / n), where s_i is
the window integral of E^2((x - shift)/mag) (1 + contrast cos(k x' - phase)).
"""

import math
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from models.distribution import Histogram
from models.fit_result import FitResult
from models.optics_config import OpticsConfig
from models.qubit import PathQubit
from optics.modes import fringe_terms
from optics.pixels import add_dark_weight, pixel_profile
from stats.r2 import DegenerateHistogramError
from utils.logger import get_logger

logger = get_logger()

FIT_TOLERANCE = 1e-12
MIN_FIT_COUNTS = 50
MAGNIFICATION_BOUNDS = (0.25, 4.0)


def expected_counts(params: Sequence[float], cfg: OpticsConfig) -> np.ndarray:
    """Model counts for (intensity, shift, magnification, fringe_phase, contrast)."""
    intensity, shift, magnification, phase, contrast = params
    profile = pixel_profile(contrast, phase, cfg, shift, magnification)
    return intensity * add_dark_weight(profile, cfg.dark_prob)


def _physical(z: np.ndarray, total: float, cfg: OpticsConfig) -> np.ndarray:
    return np.array([z[0] * total, z[1] * cfg.pitch_m, z[2], z[3], z[4]])


def _scaled(params: Sequence[float], total: float, cfg: OpticsConfig) -> np.ndarray:
    intensity, shift, magnification, phase, contrast = params
    return np.array([intensity / total, shift / cfg.pitch_m, magnification, phase, contrast])


def _bounds(cfg: OpticsConfig) -> tuple[np.ndarray, np.ndarray]:
    half_span = cfg.n_pixels / 2.0
    lower = np.array([0.0, -half_span, MAGNIFICATION_BOUNDS[0], -np.inf, 0.0])
    upper = np.array([np.inf, half_span, MAGNIFICATION_BOUNDS[1], np.inf, 1.0])
    return lower, upper


def fit_residuals(z: np.ndarray, counts: np.ndarray, total: float, cfg: OpticsConfig) -> np.ndarray:
    """Residuals in the scaled parameterization the optimizer works in."""
    return expected_counts(_physical(z, total, cfg), cfg) - counts


def _r_squared(counts: np.ndarray, model: np.ndarray) -> float:
    total_ss = float(np.sum((counts - counts.mean()) ** 2))
    if total_ss == 0.0:
        raise DegenerateHistogramError("flat histogram: R2 is undefined")
    return 1.0 - float(np.sum((counts - model) ** 2)) / total_ss


def fit_counts(
    counts: Sequence[float],
    cfg: OpticsConfig,
    starts: int = 8,
    max_nfev: int = 500,
    initial: Optional[Sequence[float]] = None,
) -> FitResult:
    """Fit intensity, shift, magnification, fringe phase and contrast to ``counts``.

    Counts may be real valued (noiseless model predictions). With no
    ``initial`` guess the fit restarts from ``starts`` evenly spaced phases
    and keeps the lowest cost.

    Raises:
        DegenerateHistogramError: if the counts are empty or flat.
    """
    k = np.asarray(counts, dtype=float)
    if k.shape != (cfg.n_pixels,):
        raise ValueError(f"expected {cfg.n_pixels} pixel counts, got shape {k.shape}")
    total = float(k.sum())
    if total <= 0.0:
        raise DegenerateHistogramError("cannot fit an empty histogram")

    lower, upper = _bounds(cfg)
    if initial is not None:
        guesses = [np.clip(_scaled(initial, total, cfg), lower, upper)]
    else:
        guesses = [
            np.array([1.0, 0.0, 1.0, 2.0 * math.pi * j / starts, 0.5]) for j in range(max(starts, 1))
        ]

    best = None
    n_evaluations = 0
    for z0 in guesses:
        result = optimize.least_squares(
            fit_residuals,
            z0,
            jac="3-point",
            method="trf",
            bounds=(lower, upper),
            ftol=FIT_TOLERANCE,
            xtol=FIT_TOLERANCE,
            gtol=FIT_TOLERANCE,
            max_nfev=max_nfev,
            args=(k, total, cfg),
        )
        n_evaluations += int(result.nfev)
        if best is None or result.cost < best.cost:
            best = result

    converged = bool(best.status > 0)
    if not converged:
        logger.warning(
            "Pattern fit did not converge",
            extra={"status": int(best.status), "solver_message": best.message, "cost": float(best.cost)},
        )

    params = _physical(best.x, total, cfg)
    params[3] = params[3] % (2.0 * math.pi)
    model = expected_counts(params, cfg)
    return FitResult(
        intensity=float(params[0]),
        shift=float(params[1]),
        magnification=float(params[2]),
        fringe_phase=float(params[3]),
        fringe_visibility=float(np.clip(params[4], 0.0, 1.0)),
        r_squared=_r_squared(k, model),
        converged=converged,
        n_evaluations=n_evaluations,
        expected_counts=model,
    )


def fit_pattern(
    hist: Histogram,
    cfg: OpticsConfig,
    qubit: Optional[PathQubit] = None,
    starts: int = 8,
    max_nfev: int = 500,
) -> FitResult:
    """Fit a measured histogram of at least MIN_FIT_COUNTS photons.

    ``qubit``, when known, adds its predicted contrast and phase as one
    more starting point.
    """
    if hist.n_pixels != cfg.n_pixels:
        raise ValueError(f"histogram has {hist.n_pixels} pixels, geometry has {cfg.n_pixels}")
    if hist.total < MIN_FIT_COUNTS:
        raise DegenerateHistogramError(f"need at least {MIN_FIT_COUNTS} counts, got {hist.total}")
    fit = fit_counts(hist.counts, cfg, starts=starts, max_nfev=max_nfev)
    if qubit is not None:
        contrast, phase = fringe_terms(qubit, cfg)
        guided = fit_counts(
            hist.counts,
            cfg,
            max_nfev=max_nfev,
            initial=(float(hist.total), 0.0, 1.0, phase, contrast),
        )
        guided_cost = float(np.sum((guided.expected_counts - hist.counts) ** 2))
        if guided_cost < float(np.sum((fit.expected_counts - hist.counts) ** 2)):
            fit = guided
    return fit


def residual_gradient(fit: FitResult, counts: Sequence[float], cfg: OpticsConfig, step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of half the squared residual norm, per scaled parameter,
    divided by |d residual / d parameter| x |residual| (the cosine the optimizer drives to zero).
    """
    k = np.asarray(counts, dtype=float)
    total = float(k.sum())
    z = _scaled(fit.as_vector(), total, cfg)
    residual = fit_residuals(z, k, total, cfg)
    out = np.zeros(z.size)
    for j in range(z.size):
        dz = np.zeros(z.size)
        dz[j] = step
        r_plus = fit_residuals(z + dz, k, total, cfg)
        r_minus = fit_residuals(z - dz, k, total, cfg)
        grad = (0.5 * r_plus @ r_plus - 0.5 * r_minus @ r_minus) / (2.0 * step)
        column = np.linalg.norm((r_plus - r_minus) / (2.0 * step))
        scale = column * np.linalg.norm(residual)
        out[j] = grad / scale if scale > 0 else 0.0
    return out
