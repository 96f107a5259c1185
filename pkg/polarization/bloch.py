"""Bloch-sphere coordinates of heralded path qubits."""

from typing import Iterable, Optional

import numpy as np

from models.qubit import PathQubit, Port, TwoQubitState
from polarization.heralding import herald, setting_for


def bloch_vector(qubit: PathQubit, coherence: float = 1.0) -> tuple[float, float, float]:
    """(x, y, z) with |up> at +z; ``coherence`` < 1 shrinks the equatorial part."""
    cross = qubit.alpha_plus.conjugate() * qubit.alpha_minus
    z = abs(qubit.alpha_plus) ** 2 - abs(qubit.alpha_minus) ** 2
    return (2.0 * coherence * cross.real, 2.0 * coherence * cross.imag, z)


def bloch_trajectory(
    state: TwoQubitState,
    port: Port,
    qwp_angles: Iterable[float],
    hwp_deg: Optional[float] = None,
) -> np.ndarray:
    """Bloch vectors of the heralded pure part along a QWP sweep, shape (n, 3)."""
    points = [bloch_vector(herald(state, setting_for(port, q, hwp_deg)).qubit) for q in qwp_angles]
    return np.array(points, dtype=float).reshape(-1, 3)
