"""Jones matrices of the idler analyzer (HWP, QWP, PBS).

Basis (H, V); angles are fast-axis angles in degrees from H.
"""

import math

import numpy as np
from scipy import optimize

from models.qubit import PORTS, Port


def rotation(theta_deg: float) -> np.ndarray:
    t = math.radians(theta_deg)
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]], dtype=complex)


def waveplate(theta_deg: float, retardance: float) -> np.ndarray:
    """R(theta) diag(1, exp(i retardance)) R(-theta)."""
    retarder = np.diag([1.0, np.exp(1j * retardance)])
    return rotation(theta_deg) @ retarder @ rotation(-theta_deg)


def half_wave_plate(theta_deg: float) -> np.ndarray:
    return waveplate(theta_deg, math.pi)


def quarter_wave_plate(theta_deg: float) -> np.ndarray:
    return waveplate(theta_deg, math.pi / 2.0)


def pbs_projector(port: Port) -> np.ndarray:
    """D1 transmits H, D2 reflects V."""
    if port not in PORTS:
        raise ValueError(f"port must be one of {PORTS}, got {port!r}")
    proj = np.zeros((2, 2), dtype=complex)
    index = PORTS.index(port)
    proj[index, index] = 1.0
    return proj


def analyzer_operator(hwp_deg: float, qwp_deg: float, port: Port) -> np.ndarray:
    """Kraus operator of one analyzer outcome; light meets the HWP, then the QWP, then the PBS."""
    return pbs_projector(port) @ quarter_wave_plate(qwp_deg) @ half_wave_plate(hwp_deg)


def projected_polarization(hwp_deg: float, qwp_deg: float, port: Port) -> np.ndarray:
    """Idler polarization vector that the outcome detects, (M^dagger e_port)."""
    basis = np.zeros(2, dtype=complex)
    basis[PORTS.index(port)] = 1.0
    return analyzer_operator(hwp_deg, qwp_deg, port).conj().T @ basis


def _solve_diagonal_hwp_angle() -> float:
    """HWP angle in [0, 45] deg for which qwp=0 and D1 detect (H + V)/sqrt(2)."""

    def imbalance(hwp_deg: float) -> float:
        h, v = projected_polarization(hwp_deg, 0.0, "D1")
        return abs(h) ** 2 - abs(v) ** 2

    return optimize.brentq(imbalance, 0.0, 45.0, xtol=1e-14)


DIAGONAL_HWP_ANGLE_DEG = _solve_diagonal_hwp_angle()
