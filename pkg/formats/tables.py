"""CSV tables for analysis outputs.

Every table is written with a header row, '.' decimals, ``%.17g`` floats
(exact round trip) and LF line endings.
"""

from pathlib import Path
from typing import Mapping, Sequence, Union

import numpy as np
import pandas as pd

from formats.errors import MalformedRowError
from models.distribution import Histogram, ModelDistribution
from models.fit_result import FitResult, R2Band
from models.qubit import HeraldScanRow
from stats.multinomial import LikelihoodRow
from stats.visibility import VisibilityEstimate

PathLike = Union[str, Path]

FLOAT_FORMAT = "%.17g"

HISTOGRAM_COLUMNS = ["pixel", "count"]
BAND_COLUMNS = ["n", "q25", "q50", "q75"]
LRT_COLUMNS = ["n", "log_p_m1", "log_p_m2", "log_lambda"]
SCAN_COLUMNS = list(HeraldScanRow.model_fields)


def write_table(frame: pd.DataFrame, path: PathLike) -> None:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def read_table(path: PathLike, columns: Sequence[str]) -> pd.DataFrame:
    """Read a CSV table and check its exact column set.

    Raises:
        MalformedRowError: on unparsable text or a different column set.
    """
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise MalformedRowError(f"{path}: {e}") from e
    if list(frame.columns) != list(columns):
        raise MalformedRowError(f"{path}: expected columns {list(columns)}, got {list(frame.columns)}")
    if frame.isna().any().any():
        raise MalformedRowError(f"{path}: empty cells")
    return frame


def write_histogram(path: PathLike, hist: Histogram) -> None:
    write_table(pd.DataFrame({"pixel": np.arange(hist.n_pixels), "count": hist.counts}), path)


def read_histogram(path: PathLike) -> Histogram:
    frame = read_table(path, HISTOGRAM_COLUMNS)
    if not np.array_equal(frame["pixel"].to_numpy(), np.arange(len(frame))):
        raise MalformedRowError(f"{path}: pixels must be listed as 0..n-1")
    try:
        return Histogram(counts=frame["count"].to_numpy())
    except ValueError as e:
        raise MalformedRowError(f"{path}: {e}") from e


def distribution_columns(n_pixels: int) -> list[str]:
    return ["n"] + [f"p{i}" for i in range(n_pixels)]


def write_distributions(path: PathLike, dists: Mapping[int, ModelDistribution]) -> None:
    """One row per click number N: ``n,p0..p{n-1}``."""
    keys = sorted(dists)
    n_pixels = dists[keys[0]].n_pixels if keys else 0
    rows = [[n, *dists[n].probs] for n in keys]
    frame = pd.DataFrame(rows, columns=distribution_columns(n_pixels))
    frame["n"] = frame["n"].astype(np.int64)
    write_table(frame, path)


def read_distributions(path: PathLike) -> dict[int, ModelDistribution]:
    try:
        header = pd.read_csv(path, nrows=0).columns
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise MalformedRowError(f"{path}: {e}") from e
    frame = read_table(path, distribution_columns(len(header) - 1))
    try:
        return {
            int(row[0]): ModelDistribution(probs=np.asarray(row[1:], dtype=float))
            for row in frame.itertuples(index=False)
        }
    except ValueError as e:
        raise MalformedRowError(f"{path}: {e}") from e


def write_band(path: PathLike, band: R2Band) -> None:
    write_table(
        pd.DataFrame({"n": band.n_grid, "q25": band.q25, "q50": band.q50, "q75": band.q75}), path
    )


def write_lrt(path: PathLike, rows: Sequence[LikelihoodRow]) -> None:
    write_table(pd.DataFrame([r.model_dump() for r in rows], columns=LRT_COLUMNS), path)


def write_scan(path: PathLike, rows: Sequence[HeraldScanRow]) -> None:
    write_table(pd.DataFrame([r.model_dump() for r in rows], columns=SCAN_COLUMNS), path)


def write_fit(path: PathLike, fit: FitResult, estimate: VisibilityEstimate) -> None:
    """``parameter,value`` rows: the fitted parameters, then quality figures."""
    values = {
        **fit.parameters(),
        "visibility": estimate.value,
        "visibility_sigma": estimate.sigma,
        "r_squared": fit.r_squared,
        "converged": float(fit.converged),
        "n_evaluations": float(fit.n_evaluations),
    }
    write_table(pd.DataFrame({"parameter": list(values), "value": list(values.values())}), path)


def write_columns(path: PathLike, columns: Mapping[str, Sequence[float]]) -> None:
    """Generic numeric table, e.g. oracle comparisons and N-slit patterns."""
    write_table(pd.DataFrame(dict(columns)), path)
