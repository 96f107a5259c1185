"""Quadrature reference for the focal-plane modes.

The focal field is evaluated as the Fourier transform of the slit-plane
mode, integrated numerically in units of the waist, with no use of the
closed-form result.
"""

import math

from scipy import integrate, optimize

from models.optics_config import OpticsConfig
from models.qubit import Branch
from optics.modes import slit_plane_mode
from utils.logger import get_logger

logger = get_logger()

QUAD_TOLERANCE = 1e-10
# Absolute floor in waist units, far below the far-tail amplitudes on the array.
QUAD_ABS_FLOOR = 1e-13
# Integration half-width around the mode centre, in waists; exp(-144) is below double precision.
HALF_SPAN_WAISTS = 12.0
_QUAD_LIMIT = 400


class OracleConvergenceError(ValueError):
    """Adaptive quadrature did not reach the requested tolerance."""


def _quad(func, a: float, b: float, **kwargs) -> float:
    result = integrate.quad(
        func,
        a,
        b,
        epsabs=QUAD_ABS_FLOOR,
        epsrel=QUAD_TOLERANCE,
        limit=_QUAD_LIMIT,
        full_output=1,
        **kwargs,
    )
    if len(result) > 3:
        logger.warning(
            "Fresnel quadrature did not converge",
            extra={"quad_message": result[3], "abserr": result[1]},
        )
        raise OracleConvergenceError(f"quadrature did not converge: {result[3]}")
    return result[0]


def fresnel_oracle(x: float, branch: Branch, cfg: OpticsConfig) -> complex:
    """Focal-plane field at ``x`` (metres) by quadrature of exp(+2 pi i x x' / (lambda f)).

    Equals focal_plane_mode(x, branch, cfg) times the constant sqrt(pi) w.

    Raises:
        OracleConvergenceError: if the quadrature misses the 1e-10 tolerance.
    """
    w = cfg.w_m
    centre = (-cfg.d_m / 2.0 if branch == "+" else cfg.d_m / 2.0) / w
    omega = 2.0 * math.pi * float(x) * w / (cfg.wavelength_m * cfg.f_m)

    def mode(t: float) -> float:
        return slit_plane_mode(t * w, branch, cfg)

    a, b = centre - HALF_SPAN_WAISTS, centre + HALF_SPAN_WAISTS
    if omega == 0.0:
        return complex(w * _quad(mode, a, b), 0.0)
    real = _quad(mode, a, b, weight="cos", wvar=omega)
    imag = _quad(mode, a, b, weight="sin", wvar=omega)
    return complex(w * real, w * imag)


def oracle_envelope_fwhm(cfg: OpticsConfig) -> float:
    """Full width at half maximum of |fresnel_oracle|, found by root bracketing."""
    peak = abs(fresnel_oracle(0.0, "+", cfg))
    analytic_half = cfg.f_m * cfg.wavelength_m / (math.pi * cfg.w_m)

    def excess(x: float) -> float:
        return abs(fresnel_oracle(x, "+", cfg)) - peak / 2.0

    half_width = optimize.brentq(excess, 0.0, 2.0 * analytic_half, xtol=1e-18, rtol=1e-14)
    return 2.0 * half_width
