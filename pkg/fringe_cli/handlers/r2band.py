"""r2band - Monte Carlo R2 buildup band of one model against the fitted wave pattern."""

import argparse

from rich.console import Console

from formats.tables import write_band
from models.qubit import PathQubit
from models.run_config import RunConfig
from optics.pixels import pixel_distribution
from stats.bands import r2_band
from stats.sources import CorpuscularSource, QMSource, fitted_reference
from utils.logger import get_logger

logger = get_logger("cli")
console = Console()


def handle_r2band(args: argparse.Namespace, config: RunConfig) -> None:
    stats = config.stats
    geometry = config.optics
    qm_dist = pixel_distribution(PathQubit.equal_superposition(), geometry)
    reference_photons = stats.reference_photons if stats.long_run_reference else stats.band_nmax
    reference, _ = fitted_reference(qm_dist, geometry, reference_photons, config.seed, starts=stats.fit_starts)

    if args.model == "qm":
        source = QMSource(qm_dist)
    else:
        corp = config.corpuscular
        source = CorpuscularSource(corp.dlm_params(), geometry, corp.emission, corp.max_messengers_per_click)

    band = r2_band(
        source,
        stats.band_grid(),
        stats.band_runs,
        config.seed,
        reference,
        threshold=stats.r2_threshold,
        chunk_runs=config.corpuscular.chunk_runs,
        workers=args.workers,
    )
    write_band(args.out, band)
    crossing = "never" if band.crossing_median is None else f"{band.crossing_median:g}"
    console.print(
        f"✅ [bold green]{args.model}[/bold green] band written to {args.out} "
        f"[dim](median N for R2 >= {stats.r2_threshold}: {crossing})[/dim]"
    )
