"""Time-tagged detection events.

Channels 0..n_pixels-1 are SPAD array pixels; the two herald detectors sit
right after the array (28 = D1, 29 = D2 for the 28-pixel array).
"""

from typing import Iterator, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.qubit import PORTS, Port

EventKind = Literal["signal", "dark"]
KINDS: tuple[EventKind, EventKind] = ("signal", "dark")

DEFAULT_ARRAY_PIXELS = 28
NO_HERALD = -1


class DetectionEvent(BaseModel):
    """One time tag."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    time_ps: int = Field(..., ge=0)
    channel: int = Field(..., ge=0)
    kind: EventKind = "signal"
    herald: Optional[Port] = None


class EventStream(BaseModel):
    """Columnar, time-sorted event stream.

    ``kind`` holds indices into KINDS, ``herald`` holds indices into PORTS or
    NO_HERALD. Arrays are read-only once the stream is built.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    time_ps: np.ndarray
    channel: np.ndarray
    kind: np.ndarray
    herald: np.ndarray
    n_pixels: int = Field(DEFAULT_ARRAY_PIXELS, ge=2)

    @model_validator(mode="before")
    @classmethod
    def _coerce_arrays(cls, data):
        if isinstance(data, dict):
            data = dict(data)
            size = len(np.asarray(data.get("time_ps", [])))
            data["time_ps"] = np.asarray(data.get("time_ps", []), dtype=np.int64)
            data["channel"] = np.asarray(data.get("channel", []), dtype=np.int16)
            data["kind"] = np.asarray(data.get("kind", np.zeros(size)), dtype=np.int8)
            data["herald"] = np.asarray(
                data.get("herald", np.full(size, NO_HERALD)), dtype=np.int8
            )
        return data

    @model_validator(mode="after")
    def _check_columns(self):
        n = self.time_ps.size
        for name in ("channel", "kind", "herald"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"column {name} has length {getattr(self, name).size}, expected {n}")
        if n:
            if self.time_ps.min() < 0:
                raise ValueError("time_ps must be non-negative")
            if self.channel.min() < 0 or self.channel.max() >= self.n_pixels + len(PORTS):
                raise ValueError("channel out of range")
            if self.kind.min() < 0 or self.kind.max() >= len(KINDS):
                raise ValueError("kind out of range")
            if self.herald.min() < NO_HERALD or self.herald.max() >= len(PORTS):
                raise ValueError("herald out of range")
        for name in ("time_ps", "channel", "kind", "herald"):
            getattr(self, name).setflags(write=False)
        return self

    @classmethod
    def empty(cls, n_pixels: int = DEFAULT_ARRAY_PIXELS) -> "EventStream":
        return cls(time_ps=[], channel=[], kind=[], herald=[], n_pixels=n_pixels)

    def __len__(self) -> int:
        return int(self.time_ps.size)

    def __iter__(self) -> Iterator[DetectionEvent]:
        for t, c, k, h in zip(self.time_ps, self.channel, self.kind, self.herald):
            yield DetectionEvent(
                time_ps=int(t),
                channel=int(c),
                kind=KINDS[int(k)],
                herald=None if h == NO_HERALD else PORTS[int(h)],
            )

    def is_sorted(self) -> bool:
        return bool(np.all(np.diff(self.time_ps) >= 0))

    def select(self, mask: np.ndarray) -> "EventStream":
        return EventStream(
            time_ps=self.time_ps[mask],
            channel=self.channel[mask],
            kind=self.kind[mask],
            herald=self.herald[mask],
            n_pixels=self.n_pixels,
        )

    def split(self) -> tuple["EventStream", "EventStream"]:
        """(array-pixel events, herald-detector events), both still sorted."""
        is_array = self.channel < self.n_pixels
        return self.select(is_array), self.select(~is_array)

    def array_pixels(self) -> np.ndarray:
        """Pixel indices of the array events, in time order."""
        return self.channel[self.channel < self.n_pixels].astype(np.int64)

    def same_as(self, other: "EventStream") -> bool:
        return (
            self.n_pixels == other.n_pixels
            and np.array_equal(self.time_ps, other.time_ps)
            and np.array_equal(self.channel, other.channel)
            and np.array_equal(self.kind, other.kind)
            and np.array_equal(self.herald, other.herald)
        )


class CoincidenceResult(BaseModel):
    """Heralded array events plus the bookkeeping of what was dropped."""

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    heralded: EventStream
    n_pairs: int = Field(..., ge=0)
    n_unmatched_array: int = Field(..., ge=0)
    n_unmatched_herald: int = Field(..., ge=0)

    def accidental_pairs(self) -> int:
        """Pairs whose array event was a dark count."""
        return int(np.count_nonzero(self.heralded.kind == KINDS.index("dark")))

    def by_port(self, port: Port) -> EventStream:
        return self.heralded.select(self.heralded.herald == PORTS.index(port))
