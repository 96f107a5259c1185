"""State of the deterministic-learning-machine detector array and its messengers."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.qubit import Branch


class Messenger(BaseModel):
    """A corpuscle that left one slit and reached one pixel."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    slit: Branch
    pixel: int = Field(..., ge=0)
    phase_phi: float

    @field_validator("phase_phi")
    @classmethod
    def _finite_phase(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("phase must be finite")
        return v

    def message(self) -> np.ndarray:
        return np.array([math.cos(self.phase_phi), math.sin(self.phase_phi)])


class DLMState(BaseModel):
    """Per-pixel internal vectors p (n x 2), learning scalars w (n) and click count.

    States are immutable values; updates return a new state.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    p: np.ndarray
    w: np.ndarray
    clicks: int = Field(0, ge=0)

    @classmethod
    def initial(cls, n_pixels: int) -> "DLMState":
        """p = (0, 0) and w = 1 at every pixel."""
        return cls(p=np.zeros((n_pixels, 2)), w=np.ones(n_pixels))

    @model_validator(mode="after")
    def _check_shapes(self):
        if self.p.ndim != 2 or self.p.shape[1] != 2:
            raise ValueError(f"p must have shape (n, 2), got {self.p.shape}")
        if self.w.shape != (self.p.shape[0],):
            raise ValueError("w must have one entry per pixel")
        if np.any(self.w < -1e-12) or np.any(self.w > 1 + 1e-12):
            raise ValueError("w must lie in [0, 1]")
        self.p.setflags(write=False)
        self.w.setflags(write=False)
        return self

    @property
    def n_pixels(self) -> int:
        return int(self.w.size)

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.p, axis=1)
