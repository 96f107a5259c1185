"""Deterministic-learning-machine detector update.

At the struck pixel only:
    mu = gamma (1 - w)
    p <- mu p + (1 - mu) e,            e = (cos phi, sin phi)
    w <- kappa w + (1 - kappa) |p_new - p_old| / 2
"""

import numpy as np

from models.dlm_state import DLMState, Messenger
from models.run_config import DLMParams


def update_rows(
    p: np.ndarray, w: np.ndarray, phase: np.ndarray, kappa: float, gamma: float
) -> tuple[np.ndarray, np.ndarray]:
    """Apply one update to each row: p (m, 2), w (m,), phase (m,). Returns new (p, w)."""
    mu = gamma * (1.0 - w)
    e = np.stack([np.cos(phase), np.sin(phase)], axis=-1)
    p_new = mu[:, None] * p + (1.0 - mu)[:, None] * e
    step = np.linalg.norm(p_new - p, axis=-1)
    w_new = kappa * w + (1.0 - kappa) * step / 2.0
    return p_new, np.clip(w_new, 0.0, 1.0)


def dlm_update(state: DLMState, m: Messenger, params: DLMParams) -> DLMState:
    """New state after messenger ``m`` reaches its pixel; other pixels are untouched."""
    if m.pixel >= state.n_pixels:
        raise ValueError(f"messenger pixel {m.pixel} outside the {state.n_pixels}-pixel array")
    k = m.pixel
    p_row, w_row = update_rows(
        state.p[k : k + 1], state.w[k : k + 1], np.array([m.phase_phi]), params.kappa, params.gamma
    )
    p = state.p.copy()
    w = state.w.copy()
    p[k] = p_row[0]
    w[k] = w_row[0]
    return DLMState(p=p, w=w, clicks=state.clicks)


def click_probability(state: DLMState, pixel: int) -> float:
    """Chance that the latest messenger at ``pixel`` produces a click: |p|^2."""
    return float(np.dot(state.p[pixel], state.p[pixel]))
