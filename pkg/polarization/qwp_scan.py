"""Heralded fringe visibility and phase along a quarter-wave-plate sweep."""

from typing import Iterable, Optional

from models.optics_config import OpticsConfig
from models.qubit import PORTS, HeraldScanRow, TwoQubitState
from optics.modes import fringe_terms
from polarization.bloch import bloch_vector
from polarization.heralding import herald, heralded_distribution, setting_for
from stats.fitting import fit_counts
from utils.logger import get_logger, log_execution_time

logger = get_logger()

# counts used for the noiseless fit of each heralded distribution
SCAN_FIT_COUNTS = 1e6


def qwp_scan(
    state: TwoQubitState,
    cfg: OpticsConfig,
    qwp_angles: Iterable[float],
    hwp_deg: Optional[float] = None,
    fit_starts: int = 8,
) -> list[HeraldScanRow]:
    """One row per (angle, port), angles in the given order and D1 before D2.

    Each row carries the analytic contrast and phase of the heralded pattern
    and the values recovered by fitting its noiseless pixel distribution.
    """
    rows = []
    with log_execution_time(logger, "qwp_scan"):
        for angle in qwp_angles:
            for port in PORTS:
                outcome = herald(state, setting_for(port, angle, hwp_deg))
                contrast, phase = fringe_terms(outcome.qubit, cfg, outcome.coherence)
                dist = heralded_distribution(outcome, cfg)
                fit = fit_counts(SCAN_FIT_COUNTS * dist.probs, cfg, starts=fit_starts)
                x, y, z = bloch_vector(outcome.qubit, outcome.coherence)
                rows.append(
                    HeraldScanRow(
                        qwp_angle=float(angle),
                        port=port,
                        probability=outcome.probability,
                        predicted_visibility=contrast,
                        fringe_phase=phase,
                        fitted_visibility=fit.fringe_visibility,
                        fitted_phase=fit.fringe_phase,
                        bloch_x=x,
                        bloch_y=y,
                        bloch_z=z,
                    )
                )
    return rows
