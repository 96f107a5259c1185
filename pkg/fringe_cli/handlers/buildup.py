"""buildup - histograms of the first N heralded detections of an event log."""

import argparse
from pathlib import Path

from rich.console import Console

from formats.events import read_events
from formats.tables import write_histogram
from models.distribution import Histogram
from models.run_config import RunConfig
from montecarlo.coincidence import heralded_pixels
from utils.logger import get_logger

logger = get_logger("cli")
console = Console()


def handle_buildup(args: argparse.Namespace, config: RunConfig) -> None:
    log = read_events(args.events)
    pixels = heralded_pixels(log.events, config.rates.coincidence_window_ps, args.port)
    frames = sorted(args.frames)
    if frames[-1] > pixels.size:
        raise ValueError(f"log holds {pixels.size} heralded detections, frame {frames[-1]} requested")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for n in frames:
        write_histogram(out_dir / f"histogram_{n}.csv", Histogram.from_pixels(pixels[:n], log.events.n_pixels))
    logger.info(
        "Wrote buildup frames",
        extra={"events": args.events, "frames": frames, "heralded": int(pixels.size)},
    )
    console.print(f"✅ [bold green]{len(frames)} frames[/bold green] written to {out_dir}")
