"""ensemble - per-N click distributions of a corpuscular ensemble."""

import argparse

from rich.console import Console

from corpuscular.ensemble import corpuscular_distribution_from_config
from formats.tables import write_distributions
from models.run_config import RunConfig
from utils.logger import get_logger

logger = get_logger("cli")
console = Console()


def handle_ensemble(args: argparse.Namespace, config: RunConfig) -> None:
    grid = config.stats.lrt_grid()
    dists = corpuscular_distribution_from_config(
        config.corpuscular, grid, config.optics, config.seed, workers=args.workers
    )
    write_distributions(args.out, dists)
    logger.info(
        "Wrote corpuscular ensemble",
        extra={"runs": config.corpuscular.ensemble_runs, "n_max": grid[-1], "out": args.out},
    )
    console.print(
        f"✅ [bold green]{config.corpuscular.ensemble_runs} runs[/bold green] x {len(grid)} N values "
        f"written to {args.out}"
    )
