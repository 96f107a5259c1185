"""Per-pixel probability distributions and count histograms."""

from typing import Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

_SUM_TOL = 1e-12


class ModelDistribution(BaseModel):
    """Probabilities p_i over the SPAD pixels.

    ``acceptance`` is the fraction of the fringe-free focal-plane power that
    the active windows capture for the state that produced the distribution.
    Mixtures weight their components by weight x acceptance, which is what a
    heralded array detection really conditions on.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    probs: np.ndarray
    acceptance: float = Field(1.0, gt=0.0)

    @field_validator("probs", mode="before")
    @classmethod
    def _as_probabilities(cls, v):
        arr = np.array(v, dtype=float, copy=True)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("probs must be a non-empty 1-D vector")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("probs must be finite and non-negative")
        total = float(arr.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"probs must sum to 1 within {_SUM_TOL}, got {total!r}")
        arr.setflags(write=False)
        return arr

    @classmethod
    def from_weights(cls, weights: Sequence[float], acceptance: float = 1.0) -> "ModelDistribution":
        """Normalize non-negative weights into a distribution."""
        arr = np.asarray(weights, dtype=float)
        total = float(arr.sum())
        if not total > 0:
            raise ValueError("weights must have a positive sum")
        return cls(probs=arr / total, acceptance=acceptance)

    @classmethod
    def uniform(cls, n_pixels: int) -> "ModelDistribution":
        return cls(probs=np.full(n_pixels, 1.0 / n_pixels))

    @property
    def n_pixels(self) -> int:
        return int(self.probs.size)

    def total_variation(self, other: "ModelDistribution") -> float:
        return 0.5 * float(np.abs(self.probs - other.probs).sum())


class Histogram(BaseModel):
    """Integer photon counts k_i per pixel."""

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    counts: np.ndarray

    @field_validator("counts", mode="before")
    @classmethod
    def _as_counts(cls, v):
        raw = np.asarray(v)
        if raw.ndim != 1 or raw.size < 1:
            raise ValueError("counts must be a non-empty 1-D vector")
        if raw.dtype.kind == "f":
            if not np.all(np.isfinite(raw)) or np.any(raw != np.round(raw)):
                raise ValueError("counts must be integers")
        arr = raw.astype(np.int64)
        if np.any(arr < 0):
            raise ValueError("counts must be non-negative")
        arr.setflags(write=False)
        return arr

    @classmethod
    def from_pixels(cls, pixels: Union[Sequence[int], np.ndarray], n_pixels: int) -> "Histogram":
        pix = np.asarray(pixels, dtype=np.int64)
        if pix.size and (pix.min() < 0 or pix.max() >= n_pixels):
            raise ValueError(f"pixel indices must lie in [0, {n_pixels})")
        return cls(counts=np.bincount(pix, minlength=n_pixels))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def n_pixels(self) -> int:
        return int(self.counts.size)


def mix_distributions(
    components: Sequence[tuple[float, ModelDistribution]],
) -> ModelDistribution:
    """Mixture of distributions weighted by ``weight x acceptance``.

    Args:
        components: (weight, distribution) pairs, e.g. herald probabilities
            and the distributions heralded at each port.

    Returns:
        The normalized mixture, with the weighted mean acceptance.
    """
    if not components:
        raise ValueError("mixture needs at least one component")
    sizes = {dist.n_pixels for _, dist in components}
    if len(sizes) != 1:
        raise ValueError(f"component sizes differ: {sorted(sizes)}")

    effective = np.array([w * dist.acceptance for w, dist in components], dtype=float)
    if np.any(effective < 0) or not effective.sum() > 0:
        raise ValueError("mixture weights must be non-negative with a positive sum")
    probs = sum(e * dist.probs for e, (_, dist) in zip(effective, components))
    weight_total = sum(w for w, _ in components)
    return ModelDistribution.from_weights(
        probs, acceptance=float(effective.sum() / weight_total)
    )
