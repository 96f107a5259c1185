"""Closed-form slit-plane and focal-plane Gaussian modes of the birefringent double slit.

Positions are in metres. Every function accepts a scalar or a numpy array
for ``x`` and returns the same shape.
"""

import math
from typing import Union

import numpy as np

from models.optics_config import OpticsConfig
from models.qubit import Branch, PathQubit

ArrayLike = Union[float, np.ndarray]


class ZeroIntensityError(ValueError):
    """The detector array collects no light for the requested pattern."""


def _branch_sign(branch: Branch) -> float:
    if branch == "+":
        return 1.0
    if branch == "-":
        return -1.0
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def slit_plane_mode(x: ArrayLike, branch: Branch, cfg: OpticsConfig) -> ArrayLike:
    """Unnormalized displaced Gaussian exp(-(x +/- d/2)^2 / w^2).

    Branch "+" is centred at -d/2, branch "-" at +d/2.
    """
    s = _branch_sign(branch)
    x = np.asarray(x, dtype=float)
    out = np.exp(-((x + s * cfg.d_m / 2.0) ** 2) / cfg.w_m**2)
    return out if out.ndim else float(out)


def envelope(x: ArrayLike, cfg: OpticsConfig) -> ArrayLike:
    """Focal-plane field envelope exp(-pi^2 w^2 x^2 / (f^2 lambda^2))."""
    x = np.asarray(x, dtype=float)
    scale = math.pi * cfg.w_m / (cfg.f_m * cfg.wavelength_m)
    out = np.exp(-((scale * x) ** 2))
    return out if out.ndim else float(out)


def envelope_intensity(x: ArrayLike, cfg: OpticsConfig) -> ArrayLike:
    return np.square(envelope(x, cfg))


def envelope_power(cfg: OpticsConfig) -> float:
    """Integral of the envelope intensity over the whole focal plane."""
    return cfg.f_m * cfg.wavelength_m / (cfg.w_m * math.sqrt(2.0 * math.pi))


def fringe_wavenumber(cfg: OpticsConfig) -> float:
    """k = 2 pi d / (lambda f), in rad/m."""
    return 2.0 * math.pi * cfg.d_m / (cfg.wavelength_m * cfg.f_m)


def fringe_period(cfg: OpticsConfig) -> float:
    return cfg.wavelength_m * cfg.f_m / cfg.d_m


def focal_plane_mode(x: ArrayLike, branch: Branch, cfg: OpticsConfig) -> ArrayLike:
    """Far-field of one displaced mode: envelope times exp(-/+ i pi d x / (lambda f))."""
    s = _branch_sign(branch)
    x = np.asarray(x, dtype=float)
    phase = -s * math.pi * cfg.d_m * x / (cfg.wavelength_m * cfg.f_m)
    out = np.asarray(envelope(x, cfg)) * np.exp(1j * phase)
    return out if out.ndim else complex(out)


def fringe_terms(qubit: PathQubit, cfg: OpticsConfig, coherence: float = 1.0) -> tuple[float, float]:
    """(contrast, phase) of the fringe factor 1 + contrast cos(k x - phase).

    ``coherence`` multiplies coherence_mu, e.g. the effective coherence of a
    heralded mixed state.
    """
    cross = qubit.cross()
    contrast = 2.0 * cfg.coherence_mu * coherence * abs(cross)
    phase = math.atan2(cross.imag, cross.real) % (2.0 * math.pi) if cross != 0 else 0.0
    return min(contrast, 1.0), phase


def fringe_intensity(
    x: ArrayLike, contrast: float, phase: float, cfg: OpticsConfig
) -> ArrayLike:
    """E^2(x) (1 + contrast cos(k x - phase))."""
    x = np.asarray(x, dtype=float)
    out = np.asarray(envelope_intensity(x, cfg)) * (
        1.0 + contrast * np.cos(fringe_wavenumber(cfg) * x - phase)
    )
    return out if out.ndim else float(out)


def pattern_intensity(
    x: ArrayLike, qubit: PathQubit, cfg: OpticsConfig, coherence: float = 1.0
) -> ArrayLike:
    """|a+ u+ + a- u-|^2 with the cross term scaled by coherence_mu (and ``coherence``)."""
    contrast, phase = fringe_terms(qubit, cfg, coherence)
    return fringe_intensity(x, contrast, phase, cfg)


def mode_overlap(cfg: OpticsConfig) -> float:
    """Overlap of the two unit-normalized slit-plane modes, exp(-d^2 / (2 w^2))."""
    return math.exp(-(cfg.d_m**2) / (2.0 * cfg.w_m**2))
