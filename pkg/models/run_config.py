"""Top-level run configuration: every parameter group plus the master seed."""

import hashlib
import json
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.optics_config import OpticsConfig, SlitArrayConfig


class RateConfig(BaseModel):
    """Source, detector and timing-electronics rates."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    pair_rate_hz: float = Field(2000.0, ge=0, description="Detected coincidences per second")
    dark_rate_hz_per_pixel: float = Field(100.0, ge=0, description="SPAD dark counts per pixel")
    jitter_fwhm_ps: float = Field(150.0, ge=0, description="Combined timing jitter (FWHM)")
    coincidence_window_ps: int = Field(1000, ge=0, description="Full coincidence window width")
    herald_singles_hz: float = Field(
        1.8e6,
        ge=0,
        description="Uncorrelated herald-detector singles, the source of accidentals",
    )
    efficiency_mask: Optional[list[float]] = Field(
        None, description="Per-pixel relative detection efficiency in [0, 1]; None = all ones"
    )

    @field_validator("efficiency_mask")
    @classmethod
    def _mask_in_unit_interval(cls, v):
        if v is not None and any(not (0.0 <= e <= 1.0) for e in v):
            raise ValueError("efficiency_mask entries must lie in [0, 1]")
        return v


class PolarizationConfig(BaseModel):
    """Entangled source quality and idler analyzer settings."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    fidelity: float = Field(0.94, ge=0.25, le=1.0, description="Fidelity to the ideal Bell state")
    hwp_angle_deg: Optional[float] = Field(
        None, description="Fixed HWP angle; None uses the angle that projects onto (H +/- V)/sqrt(2)"
    )
    qwp_angles_deg: list[float] = Field(
        default_factory=lambda: [float(a) for a in range(0, 101, 10)],
        description="QWP scan angles",
    )
    herald_port: Literal["D1", "D2"] = "D1"


class DLMParams(BaseModel):
    """Detector constants of the deterministic learning machine."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kappa: float = Field(0.99, gt=0.0, lt=1.0)
    gamma: float = Field(0.99, gt=0.0, lt=1.0)


class CorpuscularConfig(DLMParams):
    """DLM constants plus messenger emission and ensemble sizing."""

    emission: Literal["envelope", "uniform"] = "envelope"
    ensemble_runs: int = Field(10_000, ge=1)
    chunk_runs: int = Field(1000, ge=1, description="Runs per worker task; fixes the seed layout")
    max_messengers_per_click: int = Field(
        10_000, ge=1, description="Abort a run that consumes more messengers than this per click"
    )

    def dlm_params(self) -> DLMParams:
        return DLMParams(kappa=self.kappa, gamma=self.gamma)


class StatsConfig(BaseModel):
    """Analysis battery settings."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    r2_threshold: float = Field(0.96, gt=0.0, le=1.0)
    band_runs: int = Field(1000, ge=1)
    band_nmax: int = Field(2000, ge=1)
    band_step: int = Field(10, ge=1)
    bootstrap_resamples: int = Field(200, ge=1)
    fit_starts: int = Field(8, ge=1)
    fit_max_nfev: int = Field(500, ge=10)
    reference_photons: int = Field(98_000, ge=50)
    long_run_reference: bool = Field(
        True, description="Reference R2 against the long-run fit instead of the 2000-photon fit"
    )
    lrt_step: int = Field(50, ge=1)
    lrt_nmax: int = Field(2000, ge=1)

    def band_grid(self) -> list[int]:
        return list(range(self.band_step, self.band_nmax + 1, self.band_step))

    def lrt_grid(self) -> list[int]:
        return list(range(self.lrt_step, self.lrt_nmax + 1, self.lrt_step))


class RunConfig(BaseModel):
    """Complete, validated configuration of one run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    optics: OpticsConfig = Field(default_factory=OpticsConfig)
    slits: SlitArrayConfig = Field(default_factory=SlitArrayConfig)
    rates: RateConfig = Field(default_factory=RateConfig)
    polarization: PolarizationConfig = Field(default_factory=PolarizationConfig)
    corpuscular: CorpuscularConfig = Field(default_factory=CorpuscularConfig)
    stats: StatsConfig = Field(default_factory=StatsConfig)
    seed: int = Field(0, ge=0, lt=2**64)

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()
