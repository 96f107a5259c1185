"""Remote preparation of the signal path qubit by measuring the idler polarization."""

import math
from typing import Optional

import numpy as np

from models.distribution import ModelDistribution, mix_distributions
from models.optics_config import OpticsConfig
from models.qubit import PORTS, AnalyzerSetting, HeraldOutcome, PathQubit, TwoQubitState
from optics.pixels import pixel_distribution
from polarization.jones import DIAGONAL_HWP_ANGLE_DEG, analyzer_operator
from utils.logger import get_logger

logger = get_logger()

_MIN_HERALD_PROBABILITY = 1e-15


class ImpossibleHeraldError(ValueError):
    """The analyzer outcome has zero probability for this state."""


def entangled_state(fidelity: float) -> TwoQubitState:
    """Werner state with the requested fidelity F = v + (1 - v)/4."""
    if not 0.25 <= fidelity <= 1.0:
        raise ValueError(f"fidelity must lie in [1/4, 1], got {fidelity}")
    return TwoQubitState(werner_v=min(1.0, max(0.0, (fidelity - 0.25) / 0.75)))


def setting_for(port: str, qwp_deg: float, hwp_deg: Optional[float] = None) -> AnalyzerSetting:
    return AnalyzerSetting(
        hwp_angle=DIAGONAL_HWP_ANGLE_DEG if hwp_deg is None else hwp_deg,
        qwp_angle=qwp_deg,
        port=port,
    )


def conditional_density_matrix(state: TwoQubitState, setting: AnalyzerSetting) -> tuple[np.ndarray, float]:
    """Signal path density matrix after the outcome, and the outcome probability."""
    kraus = np.kron(np.eye(2), analyzer_operator(setting.hwp_angle, setting.qwp_angle, setting.port))
    rho = kraus @ state.density_matrix() @ kraus.conj().T
    probability = float(np.real(np.trace(rho)))
    if probability < _MIN_HERALD_PROBABILITY:
        raise ImpossibleHeraldError(
            f"herald outcome {setting.port} has probability {probability:.3g} "
            f"(hwp={setting.hwp_angle}, qwp={setting.qwp_angle})"
        )
    # partial trace over the idler: indices (path, pol, path', pol')
    reduced = np.einsum("ajbj->ab", rho.reshape(2, 2, 2, 2)) / probability
    return reduced, probability


def qubit_from_density(rho: np.ndarray) -> tuple[PathQubit, float]:
    """Pure qubit with the populations and cross-term phase of ``rho``, plus its coherence.

    coherence = |rho01| / sqrt(rho00 rho11), so that coherence x cross()
    of the returned qubit reproduces rho01 in magnitude.
    """
    p_plus = max(float(np.real(rho[0, 0])), 0.0)
    p_minus = max(float(np.real(rho[1, 1])), 0.0)
    off = complex(rho[0, 1])
    populations = math.sqrt(p_plus * p_minus)
    coherence = min(abs(off) / populations, 1.0) if populations > 0 else 1.0
    alpha_minus = math.sqrt(p_minus) * np.exp(-1j * np.angle(off)) if off != 0 else math.sqrt(p_minus)
    return PathQubit.from_amplitudes(math.sqrt(p_plus), alpha_minus), coherence


def herald(state: TwoQubitState, setting: AnalyzerSetting) -> HeraldOutcome:
    """Heralded signal path qubit for one analyzer outcome.

    Raises:
        ImpossibleHeraldError: if the outcome cannot occur.
    """
    rho, probability = conditional_density_matrix(state, setting)
    qubit, coherence = qubit_from_density(rho)
    logger.debug(
        "Heralded path state",
        extra={
            "port": setting.port,
            "qwp_angle": setting.qwp_angle,
            "probability": probability,
            "coherence": coherence,
        },
    )
    return HeraldOutcome(port=setting.port, qubit=qubit, coherence=coherence, probability=min(probability, 1.0))


def herald_outcomes(
    state: TwoQubitState, qwp_deg: float = 0.0, hwp_deg: Optional[float] = None
) -> list[HeraldOutcome]:
    return [herald(state, setting_for(port, qwp_deg, hwp_deg)) for port in PORTS]


def heralded_distribution(outcome: HeraldOutcome, cfg: OpticsConfig) -> ModelDistribution:
    return pixel_distribution(outcome.qubit, cfg, coherence=outcome.coherence)


def unheralded_distribution(
    state: TwoQubitState, cfg: OpticsConfig, qwp_deg: float = 0.0, hwp_deg: Optional[float] = None
) -> ModelDistribution:
    """Array distribution ignoring which herald detector fired."""
    outcomes = herald_outcomes(state, qwp_deg, hwp_deg)
    return mix_distributions([(o.probability, heralded_distribution(o, cfg)) for o in outcomes])
