"""Event-log CSV: a ``#`` header block, then ``time_ps,channel,kind,herald`` records."""

import io
import json
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from formats.config import validate_config
from formats.errors import DigestMismatchError, FormatVersionError, MalformedRowError, SortOrderError
from models.events import KINDS, NO_HERALD, EventStream
from models.qubit import PORTS
from models.run_config import RunConfig
from utils.logger import get_logger

logger = get_logger()

EVENT_FORMAT = "fringe-events"
EVENT_FORMAT_VERSION = 1
COLUMNS = ["time_ps", "channel", "kind", "herald"]
NO_HERALD_TEXT = "-"

_HERALD_TEXT = [NO_HERALD_TEXT, *PORTS]


class EventLog(BaseModel):
    """An event stream with the seed and configuration that produced it."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    events: EventStream
    seed: int = Field(0, ge=0)
    config: RunConfig = Field(default_factory=RunConfig)

    def config_digest(self) -> str:
        return self.config.digest()


def _header(log: EventLog) -> str:
    lines = [
        f"format: {EVENT_FORMAT}",
        f"version: {EVENT_FORMAT_VERSION}",
        f"seed: {log.seed}",
        f"n_pixels: {log.events.n_pixels}",
        f"config_digest: {log.config_digest()}",
        f"config: {log.config.canonical_json()}",
    ]
    return "".join(f"# {line}\n" for line in lines)


def write_events(path: Union[str, Path], log: EventLog) -> None:
    """Write ``log``; times are integer picoseconds, so the file is exact."""
    stream = log.events
    frame = pd.DataFrame(
        {
            "time_ps": stream.time_ps,
            "channel": stream.channel,
            "kind": np.array(KINDS, dtype=object)[stream.kind.astype(np.int64)],
            "herald": np.array(_HERALD_TEXT, dtype=object)[stream.herald.astype(np.int64) + 1],
        },
        columns=COLUMNS,
    )
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(_header(log))
        frame.to_csv(f, index=False, lineterminator="\n")
    logger.info("Wrote event log", extra={"path": str(path), "n_events": len(stream), "seed": log.seed})


def _parse_header(lines: list[str]) -> dict[str, str]:
    header = {}
    for line in lines:
        key, sep, value = line[1:].strip().partition(":")
        if not sep:
            raise MalformedRowError(f"header line without a key: {line.rstrip()!r}")
        header[key.strip()] = value.strip()
    return header


def _integer_column(frame: pd.DataFrame, name: str) -> np.ndarray:
    column = frame[name]
    valid = column.str.fullmatch(r"\d+").fillna(False).astype(bool)
    if not valid.all():
        row = int(np.flatnonzero(~valid.to_numpy())[0])
        raise MalformedRowError(f"record {row + 1}: {name}={column.iloc[row]!r} is not a non-negative integer")
    return column.astype(np.int64).to_numpy()


def _coded_column(frame: pd.DataFrame, name: str, labels: list[str]) -> np.ndarray:
    codes = pd.Categorical(frame[name], categories=labels).codes
    if np.any(codes < 0):
        row = int(np.flatnonzero(codes < 0)[0])
        raise MalformedRowError(f"record {row + 1}: unknown {name} {frame[name].iloc[row]!r}")
    return codes.astype(np.int64)


def read_events(path: Union[str, Path]) -> EventLog:
    """Read an event log written by write_events.

    Raises:
        FormatVersionError: for another format or version.
        DigestMismatchError: if the embedded config does not hash to the header digest.
        MalformedRowError: for unparsable headers or records.
        SortOrderError: if a timestamp decreases.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines(keepends=True)
    n_header = 0
    while n_header < len(lines) and lines[n_header].startswith("#"):
        n_header += 1
    header = _parse_header(lines[:n_header])

    if header.get("format") != EVENT_FORMAT:
        raise FormatVersionError(f"not a {EVENT_FORMAT} file (format={header.get('format')!r})")
    if header.get("version") != str(EVENT_FORMAT_VERSION):
        raise FormatVersionError(
            f"unsupported {EVENT_FORMAT} version {header.get('version')!r}, expected {EVENT_FORMAT_VERSION}"
        )
    for key in ("seed", "n_pixels", "config_digest", "config"):
        if key not in header:
            raise MalformedRowError(f"header lacks {key!r}")
    try:
        seed = int(header["seed"])
        n_pixels = int(header["n_pixels"])
        embedded = validate_config(json.loads(header["config"]))
    except (json.JSONDecodeError, ValueError) as e:
        raise MalformedRowError(f"bad header: {e}") from e
    if embedded.digest() != header["config_digest"]:
        raise DigestMismatchError("config_digest does not match the embedded config")

    try:
        frame = pd.read_csv(
            io.StringIO("".join(lines[n_header:])), dtype=str, keep_default_na=False, na_filter=False
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise MalformedRowError(f"unreadable records: {e}") from e
    if list(frame.columns) != COLUMNS:
        raise MalformedRowError(f"expected columns {COLUMNS}, got {list(frame.columns)}")

    time_ps = _integer_column(frame, "time_ps")
    channel = _integer_column(frame, "channel")
    if time_ps.size and np.any(np.diff(time_ps) < 0):
        row = int(np.flatnonzero(np.diff(time_ps) < 0)[0]) + 2
        raise SortOrderError(f"record {row}: time_ps decreases")
    kind = _coded_column(frame, "kind", list(KINDS))
    herald = _coded_column(frame, "herald", _HERALD_TEXT) + NO_HERALD

    try:
        events = EventStream(time_ps=time_ps, channel=channel, kind=kind, herald=herald, n_pixels=n_pixels)
    except ValueError as e:
        raise MalformedRowError(str(e)) from e
    return EventLog(events=events, seed=seed, config=embedded)
