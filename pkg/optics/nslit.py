"""Fraunhofer patterns of the physical 2- and 3-slit apertures (attenuated coherent source)."""

import math

import numpy as np

from models.distribution import ModelDistribution
from models.optics_config import OpticsConfig, SlitArrayConfig
from optics.modes import ArrayLike
from optics.pixels import add_dark_weight, window_integrals

_SINGULAR_TOL = 1e-12


def grating_factor(beta: np.ndarray, n_slits: int) -> np.ndarray:
    """[sin(N beta) / (N sin beta)]^2, equal to 1 where sin(beta) vanishes."""
    beta = np.asarray(beta, dtype=float)
    sin_beta = np.sin(beta)
    singular = np.abs(sin_beta) < _SINGULAR_TOL
    safe = np.where(singular, 1.0, sin_beta)
    ratio = np.sin(n_slits * beta) / (n_slits * safe)
    return np.where(singular, 1.0, ratio**2)


def nslit_intensity(x: ArrayLike, cfg: SlitArrayConfig) -> ArrayLike:
    """Normalized N-slit intensity, 1.0 at the central maximum."""
    x = np.asarray(x, dtype=float)
    scale = 1.0 / (cfg.wavelength_m * cfg.focal_f_m)
    single = np.sinc(cfg.a_m * x * scale) ** 2
    beta = math.pi * cfg.s_m * x * scale
    out = single * grating_factor(beta, cfg.n_slits)
    return out if out.ndim else float(out)


def nslit_distribution(slits: SlitArrayConfig, cfg: OpticsConfig) -> ModelDistribution:
    """Pixel distribution of the N-slit pattern on the SPAD array described by ``cfg``."""
    profile = window_integrals(lambda x: nslit_intensity(x, slits), cfg)
    return ModelDistribution.from_weights(add_dark_weight(profile, cfg.dark_prob))
