"""Path qubit, entangled polarization-path state and analyzer settings."""

import cmath
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Port = Literal["D1", "D2"]
PORTS: tuple[Port, Port] = ("D1", "D2")
Branch = Literal["+", "-"]

_NORM_TOL = 1e-12


class PathQubit(BaseModel):
    """Amplitudes over the two beam-displacer paths.

    ``alpha_plus`` multiplies |up> (the mode centred at -d/2, branch "+"),
    ``alpha_minus`` multiplies |down> (branch "-").
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    alpha_plus: complex
    alpha_minus: complex

    @model_validator(mode="after")
    def _normalized(self):
        norm = abs(self.alpha_plus) ** 2 + abs(self.alpha_minus) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"|a+|^2 + |a-|^2 must be 1, got {norm!r}")
        return self

    @classmethod
    def from_amplitudes(cls, alpha_plus: complex, alpha_minus: complex) -> "PathQubit":
        """Normalize arbitrary amplitudes and fix the global phase (alpha_plus real >= 0)."""
        vec = np.array([alpha_plus, alpha_minus], dtype=complex)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ValueError("Cannot build a path qubit from zero amplitudes")
        vec = vec / norm
        pivot = vec[0] if abs(vec[0]) > 1e-15 else vec[1]
        vec = vec * cmath.exp(-1j * cmath.phase(pivot))
        # renormalize once more so the 1e-12 invariant holds after rounding
        vec = vec / math.sqrt(abs(vec[0]) ** 2 + abs(vec[1]) ** 2)
        return cls(alpha_plus=complex(vec[0]), alpha_minus=complex(vec[1]))

    @classmethod
    def equal_superposition(cls, relative_phase: float = 0.0) -> "PathQubit":
        return cls.from_amplitudes(1.0, cmath.exp(1j * relative_phase))

    def cross(self) -> complex:
        """alpha_plus * conj(alpha_minus), the coefficient of the fringe term."""
        return self.alpha_plus * self.alpha_minus.conjugate()

    def as_vector(self) -> np.ndarray:
        return np.array([self.alpha_plus, self.alpha_minus], dtype=complex)


class TwoQubitState(BaseModel):
    """Werner mixture of the signal-path / idler-polarization Bell state.

    rho = v |psi><psi| + (1 - v) I/4 with
    |psi> = (|down H> + |up V>)/sqrt(2). Basis ordering is path (up, down)
    tensor polarization (H, V).
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    werner_v: float = Field(..., ge=0.0, le=1.0)

    @staticmethod
    def ideal_state() -> np.ndarray:
        psi = np.zeros(4, dtype=complex)
        psi[1] = 1.0  # |up, V>
        psi[2] = 1.0  # |down, H>
        return psi / math.sqrt(2.0)

    def density_matrix(self) -> np.ndarray:
        psi = self.ideal_state()
        return self.werner_v * np.outer(psi, psi.conj()) + (1.0 - self.werner_v) * np.eye(4) / 4.0

    def fidelity(self) -> float:
        psi = self.ideal_state()
        return float(np.real(psi.conj() @ self.density_matrix() @ psi))


class AnalyzerSetting(BaseModel):
    """Idler analyzer: wave-plate fast-axis angles (degrees) and the PBS port."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    hwp_angle: float
    qwp_angle: float
    port: Port

    @field_validator("hwp_angle", "qwp_angle")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("wave-plate angles must be finite")
        return v


class HeraldOutcome(BaseModel):
    """Conditional signal path state for one analyzer port.

    ``coherence`` scales the fringe term of ``qubit`` so that the pure
    PathQubit reproduces the cross term of the mixed conditional state.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    port: Port
    qubit: PathQubit
    coherence: float = Field(..., ge=0.0, le=1.0 + 1e-12)
    probability: float = Field(..., ge=0.0, le=1.0 + 1e-12)


class HeraldScanRow(BaseModel):
    """One (QWP angle, port) row of a herald scan."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    qwp_angle: float
    port: Port
    probability: float
    predicted_visibility: float = Field(..., ge=0.0, le=1.0 + 1e-12)
    fringe_phase: float
    fitted_visibility: float
    fitted_phase: float
    bloch_x: float
    bloch_y: float
    bloch_z: float
