"""Geometry of the birefringent double slit, the SPAD array and the coherent-source slits."""

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

# The main text quotes a 1.3 mm waist; the interference analysis uses 1.4 mm.
MAIN_TEXT_WAIST_MM = 1.3
ANALYSIS_WAIST_MM = 1.4

# Fraction of heralded detections that are accidental: ~5 accidental vs
# ~2000 true coincidences per second.
DEFAULT_DARK_PROB = 5.0 / 2000.0


class OpticsConfig(BaseModel):
    """Beam, lens and detector-array parameters.

    Lengths are stored in the units they are quoted in (mm, m, nm, um); the
    ``*_m`` properties return SI metres for computation.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    waist_w_mm: float = Field(ANALYSIS_WAIST_MM, gt=0, description="Gaussian mode radius w")
    displacement_d_mm: float = Field(3.68, gt=0, description="Beam-displacer path separation d")
    focal_f_m: float = Field(
        1.75,
        gt=0,
        description="Effective Fourier-lens focal length; ~7 fringe periods over the array",
    )
    wavelength_nm: float = Field(842.0, gt=0, description="Signal photon wavelength")
    coherence_mu: float = Field(
        0.93,
        ge=0.0,
        le=1.0,
        description="Cross-term attenuation from inexact path-length compensation",
    )
    pixel_pitch_um: float = Field(100.0, gt=0, description="SPAD centre-to-centre spacing")
    active_width_um: float = Field(50.0, gt=0, description="Active width of each SPAD")
    n_pixels: int = Field(28, ge=2, description="Number of SPAD pixels in use")
    dark_prob: float = Field(
        DEFAULT_DARK_PROB,
        ge=0.0,
        lt=1.0,
        description="Fraction of detections that are accidental, spread uniformly",
    )

    @model_validator(mode="after")
    def _active_fits_pitch(self):
        if self.active_width_um > self.pixel_pitch_um:
            raise ValueError(
                f"active_width_um ({self.active_width_um}) exceeds pixel_pitch_um "
                f"({self.pixel_pitch_um})"
            )
        return self

    @property
    def w_m(self) -> float:
        return self.waist_w_mm * 1e-3

    @property
    def d_m(self) -> float:
        return self.displacement_d_mm * 1e-3

    @property
    def f_m(self) -> float:
        return self.focal_f_m

    @property
    def wavelength_m(self) -> float:
        return self.wavelength_nm * 1e-9

    @property
    def pitch_m(self) -> float:
        return self.pixel_pitch_um * 1e-6

    @property
    def active_m(self) -> float:
        return self.active_width_um * 1e-6

    def pixel_centers(self) -> np.ndarray:
        """Pixel centre positions in metres, symmetric about the optical axis."""
        offsets = np.arange(self.n_pixels) - (self.n_pixels - 1) / 2.0
        return offsets * self.pitch_m

    def array_edges(self) -> tuple[float, float]:
        """Outer edges of the pixel cells (first and last half-pitch included)."""
        centers = self.pixel_centers()
        half = self.pitch_m / 2.0
        return float(centers[0] - half), float(centers[-1] + half)


class SlitArrayConfig(BaseModel):
    """Physical slits of the attenuated coherent-source measurements."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    n_slits: Literal[2, 3] = 2
    slit_width_um: float = Field(30.0, gt=0, description="Slit width a")
    separation_um: float = Field(100.0, gt=0, description="Slit centre separation s")
    focal_f_m: float = Field(0.10, gt=0, description="Focal length of the imaging lens")
    wavelength_nm: float = Field(792.0, gt=0, description="Attenuated laser wavelength")

    @model_validator(mode="after")
    def _width_below_separation(self):
        if self.slit_width_um >= self.separation_um:
            raise ValueError(
                f"slit width ({self.slit_width_um} um) must be smaller than the "
                f"separation ({self.separation_um} um)"
            )
        return self

    @property
    def a_m(self) -> float:
        return self.slit_width_um * 1e-6

    @property
    def s_m(self) -> float:
        return self.separation_um * 1e-6

    @property
    def wavelength_m(self) -> float:
        return self.wavelength_nm * 1e-9
