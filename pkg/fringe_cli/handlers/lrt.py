"""lrt - log-likelihood ratio of recorded data, wave model vs corpuscular ensemble, per N."""

import argparse

from rich.console import Console

from formats.events import read_events
from formats.tables import read_distributions, write_lrt
from models.distribution import Histogram
from models.run_config import RunConfig
from montecarlo.coincidence import heralded_pixels
from stats.fitting import fit_pattern
from stats.multinomial import lrt_series
from utils.logger import get_logger

logger = get_logger("cli")
console = Console()


def handle_lrt(args: argparse.Namespace, config: RunConfig) -> None:
    """M1 is the pattern fitted to all heralded detections; M2 is the ensemble distribution at N."""
    log = read_events(args.events)
    geometry = config.optics
    pixels = heralded_pixels(log.events, config.rates.coincidence_window_ps)
    m2_by_n = read_distributions(args.corp_ensemble)

    grid = [n for n in sorted(m2_by_n) if n <= pixels.size]
    if not grid:
        raise ValueError(f"no ensemble N is covered by the {pixels.size} heralded detections")
    if m2_by_n[grid[0]].n_pixels != geometry.n_pixels:
        raise ValueError(f"ensemble has {m2_by_n[grid[0]].n_pixels} pixels, geometry has {geometry.n_pixels}")

    fit = fit_pattern(
        Histogram.from_pixels(pixels, geometry.n_pixels),
        geometry,
        starts=config.stats.fit_starts,
        max_nfev=config.stats.fit_max_nfev,
    )
    rows = lrt_series(pixels, fit.distribution(geometry), m2_by_n, grid)
    write_lrt(args.out, rows)

    smallest = min(row.log_lambda for row in rows)
    logger.info("Likelihood ratios computed", extra={"n_values": len(rows), "min_log_lambda": smallest})
    console.print(f"✅ [bold green]{len(rows)} N values[/bold green] written to {args.out} [dim](min log Λ = {smallest:.3f})[/dim]")
