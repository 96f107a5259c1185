"""Messenger emission: slit choice, target pixel and accumulated phase."""

import math
from typing import Literal

import numpy as np
from scipy import special

from models.distribution import ModelDistribution
from models.dlm_state import Messenger
from models.optics_config import OpticsConfig

Emission = Literal["envelope", "uniform"]

# slit index 0 is branch "+" at -d/2, index 1 is branch "-" at +d/2
SLIT_BRANCHES = ("+", "-")


def slit_positions(geometry: OpticsConfig) -> np.ndarray:
    return np.array([-geometry.d_m / 2.0, geometry.d_m / 2.0])


def messenger_phase_table(geometry: OpticsConfig) -> np.ndarray:
    """Phases 2 pi L / lambda mod 2 pi, shape (2 slits, n_pixels).

    L is the straight-line distance from the slit centre to the pixel centre
    across the effective focal length.
    """
    dx = geometry.pixel_centers()[None, :] - slit_positions(geometry)[:, None]
    path = np.hypot(geometry.f_m, dx)
    return np.mod(2.0 * math.pi * path / geometry.wavelength_m, 2.0 * math.pi)


def emission_sigma(geometry: OpticsConfig) -> float:
    """Width of the single-mode far-field intensity envelope, f lambda / (2 pi w)."""
    return geometry.f_m * geometry.wavelength_m / (2.0 * math.pi * geometry.w_m)


def _cell_index(x: np.ndarray, geometry: OpticsConfig) -> np.ndarray:
    left, _ = geometry.array_edges()
    cells = np.floor((x - left) / geometry.pitch_m).astype(np.int64)
    return np.clip(cells, 0, geometry.n_pixels - 1)


def sample_targets(
    rng: np.random.Generator, geometry: OpticsConfig, slits: np.ndarray, emission: Emission
) -> np.ndarray:
    """Target pixel for each messenger leaving ``slits`` (0 or 1)."""
    left, right = geometry.array_edges()
    u = rng.random(slits.size)
    if emission == "envelope":
        sigma = emission_sigma(geometry)
        lo, hi = special.ndtr(left / sigma), special.ndtr(right / sigma)
        x = sigma * special.ndtri(lo + u * (hi - lo))
    elif emission == "uniform":
        origin = slit_positions(geometry)[slits]
        theta_lo = np.arctan((left - origin) / geometry.f_m)
        theta_hi = np.arctan((right - origin) / geometry.f_m)
        x = origin + geometry.f_m * np.tan(theta_lo + u * (theta_hi - theta_lo))
    else:
        raise ValueError(f"unknown emission profile {emission!r}")
    return _cell_index(x, geometry)


def propagate_messengers(
    rng: np.random.Generator,
    geometry: OpticsConfig,
    size: int,
    emission: Emission = "envelope",
    phase_table: np.ndarray = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(slit, pixel, phase) arrays for ``size`` independent messengers."""
    if phase_table is None:
        phase_table = messenger_phase_table(geometry)
    slits = (rng.random(size) < 0.5).astype(np.int64)
    pixels = sample_targets(rng, geometry, slits, emission)
    return slits, pixels, phase_table[slits, pixels]


def propagate_messenger(
    rng: np.random.Generator, geometry: OpticsConfig, emission: Emission = "envelope"
) -> Messenger:
    slits, pixels, phases = propagate_messengers(rng, geometry, 1, emission)
    return Messenger(slit=SLIT_BRANCHES[slits[0]], pixel=int(pixels[0]), phase_phi=float(phases[0]))


def emission_distribution(geometry: OpticsConfig, emission: Emission = "envelope") -> ModelDistribution:
    """Exact pixel distribution of a single messenger's target."""
    left, right = geometry.array_edges()
    edges = left + geometry.pitch_m * np.arange(geometry.n_pixels + 1)
    edges[-1] = right
    if emission == "envelope":
        cdf = special.ndtr(edges / emission_sigma(geometry))
        return ModelDistribution.from_weights(np.diff(cdf))
    weights = np.zeros(geometry.n_pixels)
    for origin in slit_positions(geometry):
        theta = np.arctan((edges - origin) / geometry.f_m)
        weights += 0.5 * np.diff(theta) / (theta[-1] - theta[0])
    return ModelDistribution.from_weights(weights)
