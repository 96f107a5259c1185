"""heraldscan - heralded visibility and phase over the QWP angles."""

import argparse

from rich.console import Console
from rich.table import Table

from formats.tables import write_scan
from models.run_config import RunConfig
from polarization.heralding import entangled_state
from polarization.qwp_scan import qwp_scan
from utils.logger import get_logger

logger = get_logger("cli")
console = Console()


def handle_heraldscan(args: argparse.Namespace, config: RunConfig) -> None:
    pol = config.polarization
    rows = qwp_scan(
        entangled_state(pol.fidelity),
        config.optics,
        pol.qwp_angles_deg,
        pol.hwp_angle_deg,
        fit_starts=config.stats.fit_starts,
    )
    write_scan(args.out, rows)

    table = Table(title="Herald scan")
    for column in ("QWP", "port", "P", "V (fit)"):
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(f"{row.qwp_angle:g}", row.port, f"{row.probability:.3f}", f"{row.fitted_visibility:.3f}")
    console.print(table)
    console.print(f"✅ [bold green]{len(rows)} rows[/bold green] written to {args.out}")
