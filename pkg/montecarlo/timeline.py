"""Time-tag synthesis: pair arrivals, timing jitter, dark counts and herald singles."""

import math
from typing import Optional, Sequence, Union

import numpy as np

from models.events import KINDS, NO_HERALD, EventStream
from models.qubit import PORTS, Port
from models.run_config import RateConfig
from montecarlo.seeding import SeedStream
from utils.logger import get_logger

logger = get_logger()

PS_PER_S = 1e12
FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))

_SIGNAL = KINDS.index("signal")
_DARK = KINDS.index("dark")


def jitter_sigma_ps(rates: RateConfig) -> float:
    return rates.jitter_fwhm_ps / FWHM_PER_SIGMA


def accidental_herald_probability(rates: RateConfig) -> float:
    """Chance that an uncorrelated herald single falls in the window around one array event."""
    return -math.expm1(-rates.herald_singles_hz * rates.coincidence_window_ps / PS_PER_S)


def _port_indices(herald_ports: Union[Port, Sequence[Port]], n: int) -> np.ndarray:
    if isinstance(herald_ports, str):
        return np.full(n, PORTS.index(herald_ports), dtype=np.int8)
    ports = np.array([PORTS.index(p) for p in herald_ports], dtype=np.int8)
    if ports.size != n:
        raise ValueError(f"got {ports.size} herald ports for {n} pairs")
    return ports


def _to_ps(seconds: np.ndarray) -> np.ndarray:
    return np.maximum(np.rint(seconds * PS_PER_S), 0).astype(np.int64)


def timeline(
    pixels: Sequence[int],
    rates: RateConfig,
    seed: int,
    n_pixels: int = 28,
    herald_ports: Optional[Union[Port, Sequence[Port]]] = None,
    duration_s: Optional[float] = None,
) -> EventStream:
    """Sorted event stream for a sequence of signal-photon pixels.

    Pairs arrive as a Poisson process at ``pair_rate_hz``; every detector
    adds independent Gaussian jitter. Dark counts are Poisson per pixel over
    ``duration_s`` (default: the last pair arrival). With ``herald_ports``
    (one port or one per pair) the idler detections are included, plus the
    herald singles that happen to land inside the coincidence window of a
    dark count.

    Args:
        pixels: Array pixel hit by each signal photon, in emission order.
        rates: Rates, jitter and window.
        seed: Master seed; every random element has its own substream.
        n_pixels: Array size; herald channels follow the array.
        herald_ports: Port of the herald detection for each pair.
        duration_s: Length of the dark-count window.

    Returns:
        EventStream sorted by time, ties broken by channel.
    """
    pixels = np.asarray(pixels, dtype=np.int64)
    n = int(pixels.size)
    if n and (pixels.min() < 0 or pixels.max() >= n_pixels):
        raise ValueError(f"pixel indices must lie in [0, {n_pixels})")
    if n and rates.pair_rate_hz <= 0:
        raise ValueError("pair_rate_hz must be positive to place signal photons in time")

    seeds = SeedStream(seed)
    sigma_s = jitter_sigma_ps(rates) / PS_PER_S

    emission = np.cumsum(seeds.generator("arrivals").exponential(1.0 / rates.pair_rate_hz, n)) if n else np.zeros(0)
    signal_s = emission + seeds.generator("array_jitter").normal(0.0, sigma_s, n)
    if duration_s is None:
        duration_s = float(emission[-1]) if n else 0.0

    keep = np.ones(n, dtype=bool)
    if rates.efficiency_mask is not None:
        mask = np.asarray(rates.efficiency_mask, dtype=float)
        if mask.size != n_pixels:
            raise ValueError(f"efficiency_mask has {mask.size} entries for {n_pixels} pixels")
        keep = seeds.generator("efficiency").random(n) < mask[pixels]

    dark_rng = seeds.generator("darks")
    n_dark = int(dark_rng.poisson(rates.dark_rate_hz_per_pixel * n_pixels * duration_s))
    dark_s = np.sort(dark_rng.uniform(0.0, duration_s, n_dark))
    dark_pixels = dark_rng.integers(0, n_pixels, n_dark)

    times = [_to_ps(signal_s[keep]), _to_ps(dark_s)]
    channels = [pixels[keep], dark_pixels]
    kinds = [np.full(int(keep.sum()), _SIGNAL), np.full(n_dark, _DARK)]

    if herald_ports is not None:
        ports = _port_indices(herald_ports, n)
        herald_s = emission + seeds.generator("herald_jitter").normal(0.0, sigma_s, n)
        times.append(_to_ps(herald_s))
        channels.append(n_pixels + ports.astype(np.int64))
        kinds.append(np.full(n, _SIGNAL))

        acc_rng = seeds.generator("herald_singles")
        hit = acc_rng.random(n_dark) < accidental_herald_probability(rates)
        half_window_s = rates.coincidence_window_ps / (2.0 * PS_PER_S)
        offsets = acc_rng.uniform(-half_window_s, half_window_s, n_dark)
        single_ports = acc_rng.integers(0, len(PORTS), n_dark)
        times.append(_to_ps(dark_s[hit] + offsets[hit]))
        channels.append(n_pixels + single_ports[hit])
        kinds.append(np.full(int(hit.sum()), _DARK))

    time_ps = np.concatenate(times)
    channel = np.concatenate(channels)
    kind = np.concatenate(kinds)
    order = np.lexsort((channel, time_ps))

    logger.debug(
        "Synthesized timeline",
        extra={
            "seed": seed,
            "n_signal": int(keep.sum()),
            "n_dark": n_dark,
            "duration_s": duration_s,
            "with_herald": herald_ports is not None,
        },
    )
    return EventStream(
        time_ps=time_ps[order],
        channel=channel[order],
        kind=kind[order],
        herald=np.full(time_ps.size, NO_HERALD),
        n_pixels=n_pixels,
    )
