"""Results of pattern fits and R2 buildup bands."""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.distribution import ModelDistribution
from models.optics_config import OpticsConfig
from optics.pixels import profile_distribution

FIT_PARAMETERS = ("intensity", "shift", "magnification", "fringe_phase", "contrast")


class FitResult(BaseModel):
    """Best-fit pixel-integrated pattern.

    ``shift`` is in metres; ``fringe_phase`` is wrapped to [0, 2*pi).
    ``fringe_visibility`` is the fitted contrast of the fringe factor in
    E^2 (1 + contrast cos(k x - phase)): (Imax - Imin)/(Imax + Imin) of
    that factor over one period. The envelope E^2 does not enter, so a
    fringe-free pattern has visibility 0 however narrow its envelope.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    intensity: float
    shift: float
    magnification: float = Field(..., gt=0)
    fringe_phase: float
    fringe_visibility: float = Field(..., ge=0.0, le=1.0)
    r_squared: float = Field(..., le=1.0 + 1e-12)
    converged: bool = True
    n_evaluations: int = 0
    expected_counts: Optional[np.ndarray] = None

    @field_validator("expected_counts", mode="before")
    @classmethod
    def _read_only(cls, v):
        if v is None:
            return v
        arr = np.array(v, dtype=float, copy=True)
        arr.setflags(write=False)
        return arr

    def parameters(self) -> dict[str, float]:
        return {
            "intensity": self.intensity,
            "shift": self.shift,
            "magnification": self.magnification,
            "fringe_phase": self.fringe_phase,
            "contrast": self.fringe_visibility,
        }

    def as_vector(self) -> np.ndarray:
        return np.array([self.parameters()[name] for name in FIT_PARAMETERS])

    def distribution(self, cfg: OpticsConfig) -> ModelDistribution:
        """The fitted pattern as a pixel distribution, dark weight included."""
        return profile_distribution(
            self.fringe_visibility, self.fringe_phase, cfg, self.shift, self.magnification
        )


class R2Band(BaseModel):
    """Per-N interquartile band of R2 for one model."""

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    model: str
    n_grid: list[int]
    q25: list[float]
    q50: list[float]
    q75: list[float]
    runs: int = Field(..., ge=1)
    threshold: float = 0.96
    crossing_median: Optional[float] = Field(
        None, description="Median over runs of the first N with R2 >= threshold"
    )

    @model_validator(mode="after")
    def _ordered(self):
        if not (len(self.n_grid) == len(self.q25) == len(self.q50) == len(self.q75)):
            raise ValueError("band columns must have equal length")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ValueError("n_grid must be strictly increasing")
        for a, b, c in zip(self.q25, self.q50, self.q75):
            if not (a <= b + 1e-12 and b <= c + 1e-12):
                raise ValueError("quartiles must satisfy q25 <= q50 <= q75")
        return self
