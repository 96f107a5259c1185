"""Discretization of focal-plane patterns onto the SPAD array."""

from typing import Callable

import numpy as np

from models.distribution import ModelDistribution
from models.optics_config import OpticsConfig
from models.qubit import PathQubit
from optics.modes import (
    ZeroIntensityError,
    envelope_power,
    fringe_intensity,
    fringe_terms,
)

# Gauss-Legendre order per active window; the pattern varies on the scale of
# a fringe period, several times wider than a window.
QUADRATURE_ORDER = 32

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(QUADRATURE_ORDER)


def window_integrals(intensity: Callable[[np.ndarray], np.ndarray], cfg: OpticsConfig) -> np.ndarray:
    """Integrate ``intensity(x)`` over each pixel's active window (top-hat response)."""
    half = cfg.active_m / 2.0
    x = cfg.pixel_centers()[:, None] + half * _NODES[None, :]
    return half * (np.asarray(intensity(x)) @ _WEIGHTS)


def pixel_profile(
    contrast: float,
    phase: float,
    cfg: OpticsConfig,
    shift: float = 0.0,
    magnification: float = 1.0,
) -> np.ndarray:
    """Raw per-window integrals of E^2 (1 + contrast cos(k x' - phase)).

    The pattern is imaged with a transverse ``shift`` (metres) and a
    ``magnification``: detector position x sees x' = (x - shift) / magnification.
    """
    if magnification <= 0:
        raise ValueError(f"magnification must be positive, got {magnification}")
    return window_integrals(
        lambda x: fringe_intensity((x - shift) / magnification, contrast, phase, cfg), cfg
    )


def add_dark_weight(profile: np.ndarray, dark_prob: float) -> np.ndarray:
    """Normalize a raw profile and mix in the uniform dark weight."""
    total = float(profile.sum())
    if not np.isfinite(total) or total <= 0.0:
        raise ZeroIntensityError("the active windows collect zero intensity")
    n = profile.size
    return (1.0 - dark_prob) * profile / total + dark_prob / n


def profile_distribution(
    contrast: float,
    phase: float,
    cfg: OpticsConfig,
    shift: float = 0.0,
    magnification: float = 1.0,
) -> ModelDistribution:
    profile = pixel_profile(contrast, phase, cfg, shift, magnification)
    probs = add_dark_weight(profile, cfg.dark_prob)
    acceptance = float(profile.sum()) / (magnification * envelope_power(cfg))
    return ModelDistribution.from_weights(probs, acceptance=acceptance)


def pixel_distribution(
    qubit: PathQubit, cfg: OpticsConfig, coherence: float = 1.0
) -> ModelDistribution:
    """Detection probabilities of the SPAD pixels for a path qubit.

    Args:
        qubit: Path amplitudes behind the beam displacer.
        cfg: Optics and array geometry; ``dark_prob`` adds a uniform weight.
        coherence: Extra cross-term factor on top of coherence_mu (the
            effective coherence of a heralded mixed state).

    Returns:
        ModelDistribution whose acceptance is the share of the fringe-free
        focal-plane power landing on active windows.

    Raises:
        ZeroIntensityError: if no light reaches the active windows.
    """
    contrast, phase = fringe_terms(qubit, cfg, coherence)
    return profile_distribution(contrast, phase, cfg)


def envelope_distribution(cfg: OpticsConfig) -> ModelDistribution:
    """The fringe-free distribution (one slit open, or a fully mixed path state)."""
    return profile_distribution(0.0, 0.0, cfg)
