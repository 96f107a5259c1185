"""Multinomial likelihoods and the likelihood-ratio test between two models."""

from typing import Mapping, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import special

from models.distribution import Histogram, ModelDistribution
from utils.logger import get_logger

logger = get_logger()


class IndeterminateRatioError(ValueError):
    """Both models assign zero probability to the data."""


class LikelihoodRow(BaseModel):
    """Log-likelihoods of the first N events under two models."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int
    log_p_m1: float
    log_p_m2: float
    log_lambda: float


def multinomial_log_pmf(hist: Histogram, model: ModelDistribution) -> float:
    """log P(k | p) = log N! - sum log k_i! + sum k_i log p_i.

    Returns -inf, with a warning, when a pixel with p_i = 0 holds counts.
    """
    if hist.n_pixels != model.n_pixels:
        raise ValueError(f"histogram has {hist.n_pixels} pixels, model has {model.n_pixels}")
    k = hist.counts.astype(float)
    value = float(special.gammaln(k.sum() + 1.0) - special.gammaln(k + 1.0).sum() + special.xlogy(k, model.probs).sum())
    if value == -np.inf:
        logger.warning(
            "Histogram has counts where the model has zero probability",
            extra={"impossible_pixels": np.flatnonzero((model.probs == 0) & (k > 0)).tolist()},
        )
    return value


def log_likelihood_ratio(hist: Histogram, m1: ModelDistribution, m2: ModelDistribution) -> float:
    """log P(D | M1) - log P(D | M2); +/-inf when only one model rules the data out.

    Raises:
        IndeterminateRatioError: when both models give the data zero probability.
    """
    lp1 = multinomial_log_pmf(hist, m1)
    lp2 = multinomial_log_pmf(hist, m2)
    if lp1 == -np.inf and lp2 == -np.inf:
        raise IndeterminateRatioError("both models assign zero probability to the histogram")
    return lp1 - lp2


def lrt_series(
    pixels: Sequence[int],
    m1: ModelDistribution,
    m2_by_n: Mapping[int, ModelDistribution],
    n_grid: Sequence[int],
) -> list[LikelihoodRow]:
    """Likelihood ratio of the first N events, for every N in ``n_grid``.

    ``m2_by_n[N]`` is the alternative model's distribution at click N.
    """
    pix = np.asarray(pixels, dtype=np.int64)
    rows = []
    for n in n_grid:
        if n > pix.size:
            raise ValueError(f"N={n} exceeds the {pix.size} recorded events")
        hist = Histogram.from_pixels(pix[:n], m1.n_pixels)
        lp1 = multinomial_log_pmf(hist, m1)
        lp2 = multinomial_log_pmf(hist, m2_by_n[n])
        if lp1 == -np.inf and lp2 == -np.inf:
            raise IndeterminateRatioError(f"both models assign zero probability at N={n}")
        rows.append(LikelihoodRow(n=int(n), log_p_m1=lp1, log_p_m2=lp2, log_lambda=lp1 - lp2))
    return rows
