"""Pairing of array detections with herald detections."""

from typing import Optional

import numpy as np

from models.events import NO_HERALD, CoincidenceResult, EventStream
from models.qubit import Port
from utils.logger import get_logger

logger = get_logger()


class UnsortedStreamError(ValueError):
    """An input stream is not nondecreasing in time."""


def coincidence_filter(signal: EventStream, herald: EventStream, window_ps: int) -> CoincidenceResult:
    """Keep array events with a herald detection within +/- window_ps / 2.

    Array events are visited in time order and each takes the nearest unused
    herald event in its window (ties go to the earlier herald), so a herald
    event is matched at most once.

    Args:
        signal: Array-pixel events, time sorted.
        herald: Herald-detector events (D1/D2 channels), time sorted.
        window_ps: Full coincidence window width.

    Returns:
        CoincidenceResult whose ``heralded`` stream carries the port of the
        matched herald on every kept array event.

    Raises:
        UnsortedStreamError: if either stream is not time sorted.
    """
    if window_ps < 0:
        raise ValueError(f"window_ps must be non-negative, got {window_ps}")
    for name, stream in (("signal", signal), ("herald", herald)):
        if not stream.is_sorted():
            raise UnsortedStreamError(f"{name} stream is not sorted by time")
    if len(signal) and signal.channel.max() >= signal.n_pixels:
        raise ValueError("signal stream contains herald-detector channels")
    if len(herald) and herald.channel.min() < herald.n_pixels:
        raise ValueError("herald stream contains array channels")

    half = window_ps / 2.0
    t_sig = signal.time_ps.astype(np.int64)
    t_her = herald.time_ps.astype(np.int64)
    lo = np.searchsorted(t_her, t_sig - half, side="left")
    hi = np.searchsorted(t_her, t_sig + half, side="right")

    used = np.zeros(t_her.size, dtype=bool)
    match = np.full(t_sig.size, -1, dtype=np.int64)
    for i in np.flatnonzero(hi > lo):
        candidates = np.arange(lo[i], hi[i])
        candidates = candidates[~used[candidates]]
        if candidates.size == 0:
            continue
        best = candidates[np.argmin(np.abs(t_her[candidates] - t_sig[i]))]
        used[best] = True
        match[i] = best

    matched = match >= 0
    ports = np.full(t_sig.size, NO_HERALD, dtype=np.int8)
    ports[matched] = herald.channel[match[matched]] - herald.n_pixels
    heralded = EventStream(
        time_ps=signal.time_ps[matched],
        channel=signal.channel[matched],
        kind=signal.kind[matched],
        herald=ports[matched],
        n_pixels=signal.n_pixels,
    )
    n_pairs = int(matched.sum())
    logger.debug(
        "Coincidence filter",
        extra={"n_signal": len(signal), "n_herald": len(herald), "n_pairs": n_pairs, "window_ps": window_ps},
    )
    return CoincidenceResult(
        heralded=heralded,
        n_pairs=n_pairs,
        n_unmatched_array=len(signal) - n_pairs,
        n_unmatched_herald=len(herald) - n_pairs,
    )


def herald_stream(stream: EventStream, window_ps: int) -> CoincidenceResult:
    """Split a combined stream and run the coincidence filter on its two halves."""
    array_events, herald_events = stream.split()
    return coincidence_filter(array_events, herald_events, window_ps)


def heralded_pixels(stream: EventStream, window_ps: int, port: Optional[Port] = None) -> np.ndarray:
    """Pixels of the heralded array detections in time order.

    A stream without herald channels (an unheralded coherent source) yields
    every array event. ``port`` keeps only detections heralded by that port.
    """
    array_events, herald_events = stream.split()
    if len(herald_events) == 0:
        return array_events.array_pixels()
    result = coincidence_filter(array_events, herald_events, window_ps)
    heralded = result.heralded if port is None else result.by_port(port)
    return heralded.array_pixels()
