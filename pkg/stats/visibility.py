"""Fringe visibility with a parametric-bootstrap uncertainty."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from models.fit_result import FitResult
from models.optics_config import OpticsConfig
from montecarlo.seeding import generator
from stats.fitting import fit_counts
from utils.logger import get_logger, log_execution_time

logger = get_logger()


class VisibilityEstimate(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    value: float = Field(..., ge=0.0, le=1.0)
    sigma: float = Field(..., ge=0.0)
    resamples: int = Field(..., ge=0)


def visibility(
    fit: FitResult,
    cfg: OpticsConfig,
    resamples: int = 200,
    seed: int = 0,
    max_nfev: int = 500,
) -> VisibilityEstimate:
    """Fitted fringe visibility and its bootstrap standard deviation.

    Each resample draws Poisson counts from the fitted expected counts and
    refits starting at the fitted parameters.
    """
    if fit.expected_counts is None:
        raise ValueError("fit carries no expected counts to resample")
    if resamples < 2:
        return VisibilityEstimate(value=fit.fringe_visibility, sigma=0.0, resamples=resamples)

    rng = generator(seed, "bootstrap")
    start = fit.as_vector()
    values = np.empty(resamples)
    with log_execution_time(logger, "visibility_bootstrap"):
        for i in range(resamples):
            counts = rng.poisson(fit.expected_counts)
            if counts.sum() == 0 or np.all(counts == counts[0]):
                values[i] = np.nan
                continue
            values[i] = fit_counts(counts, cfg, max_nfev=max_nfev, initial=start).fringe_visibility
    if np.isnan(values).any():
        logger.warning(
            "Skipped degenerate bootstrap resamples",
            extra={"skipped": int(np.isnan(values).sum()), "resamples": resamples},
        )
    return VisibilityEstimate(
        value=fit.fringe_visibility, sigma=float(np.nanstd(values, ddof=1)), resamples=resamples
    )
