#!/usr/bin/env python3
"""
Fringe buildup CLI

Simulates photon-by-photon double-slit buildups and writes every analysis
(buildup frames, R2 bands, likelihood ratios, herald scans, fits, optics
oracles) as CSV data.

Usage:
    python -m fringe_cli.cli simulate qm --photons 2000 --seed 7 --out qm.csv
    python -m fringe_cli.cli heraldscan --qwp 0:100:10 --out scan.csv
"""

import argparse
import json
import sys
from typing import Callable, Optional, Sequence

from dotenv import load_dotenv

from fringe_cli.handlers.buildup import handle_buildup
from fringe_cli.handlers.ensemble import handle_ensemble
from fringe_cli.handlers.fit import handle_fit
from fringe_cli.handlers.heraldscan import handle_heraldscan
from fringe_cli.handlers.lrt import handle_lrt
from fringe_cli.handlers.oracle import handle_oracle
from fringe_cli.handlers.r2band import handle_r2band
from fringe_cli.handlers.simulate import handle_simulate
from fringe_cli.settings import resolve_config
from formats.errors import ConfigParseError, ConfigValidationError, UnknownConfigKeyError
from models.run_config import RunConfig
from utils.logger import enable_console_output, get_logger

load_dotenv()
logger = get_logger("cli")

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_FILE = 4
EXIT_DATA = 5

# argparse dest -> dotted RunConfig key, per subcommand
COMMON_FLAG_KEYS = {"seed": "seed"}
FLAG_KEYS: dict[str, dict[str, str]] = {
    "simulate": {
        "port": "polarization.herald_port",
        "fidelity": "polarization.fidelity",
        "qwp": "polarization.qwp_angles_deg",
        "hwp": "polarization.hwp_angle_deg",
        "slits": "slits.n_slits",
        "emission": "corpuscular.emission",
    },
    "buildup": {"window": "rates.coincidence_window_ps"},
    "ensemble": {
        "runs": "corpuscular.ensemble_runs",
        "nmax": "stats.lrt_nmax",
        "step": "stats.lrt_step",
        "emission": "corpuscular.emission",
    },
    "r2band": {
        "runs": "stats.band_runs",
        "nmax": "stats.band_nmax",
        "step": "stats.band_step",
        "threshold": "stats.r2_threshold",
        "reference_photons": "stats.reference_photons",
        "emission": "corpuscular.emission",
    },
    "lrt": {"window": "rates.coincidence_window_ps", "starts": "stats.fit_starts"},
    "heraldscan": {
        "qwp": "polarization.qwp_angles_deg",
        "fidelity": "polarization.fidelity",
        "hwp": "polarization.hwp_angle_deg",
        "starts": "stats.fit_starts",
    },
    "fit": {"resamples": "stats.bootstrap_resamples", "starts": "stats.fit_starts"},
    "oracle": {"slits": "slits.n_slits"},
}

# Flags that name inputs, outputs or execution resources. They never reach
# RunConfig, so the config digest does not depend on them.
IO_FLAGS: dict[str, set[str]] = {
    "simulate": {"source", "photons", "out"},
    "buildup": {"events", "frames", "out", "port"},
    "ensemble": {"workers", "out"},
    "r2band": {"model", "workers", "out"},
    "lrt": {"events", "corp_ensemble", "out"},
    "heraldscan": {"out"},
    "fit": {"hist", "out"},
    "oracle": {"kind", "points", "out"},
}
COMMON_IO_FLAGS = {"config", "verbose", "help"}

HANDLERS: dict[str, Callable[[argparse.Namespace, RunConfig], None]] = {
    "simulate": handle_simulate,
    "buildup": handle_buildup,
    "ensemble": handle_ensemble,
    "r2band": handle_r2band,
    "lrt": handle_lrt,
    "heraldscan": handle_heraldscan,
    "fit": handle_fit,
    "oracle": handle_oracle,
}


class UsageError(Exception):
    """Unknown subcommand, unknown flag or malformed flag value."""


class FringeArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def int_list(text: str) -> list[int]:
    """``"20,200,2000"`` -> [20, 200, 2000]."""
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return values


def angle_list(text: str) -> list[float]:
    """``"0:100:10"`` (inclusive range) or ``"0,22.5,45"`` -> angles in degrees."""
    try:
        if ":" in text:
            start, stop, step = (float(part) for part in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int((stop - start) / step + 1e-9) + 1
            return [start + k * step for k in range(count)]
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:STOP:STEP or a comma list of angles, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("no angles given")
    return values


def build_parser() -> FringeArgumentParser:
    common = FringeArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (default: built-in defaults)")
    common.add_argument("--seed", type=int, help="Master seed (default: config, then FRINGE_SEED)")
    common.add_argument("--verbose", action="store_true", help="Echo log records to stderr")

    parser = FringeArgumentParser(
        prog="fringe",
        description="Photon-by-photon double-slit buildup simulator and statistics",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m fringe_cli.cli simulate qm --photons 2000 --seed 7 --out qm.csv
  python -m fringe_cli.cli buildup --events qm.csv --frames 20,200,2000 --out frames/
  python -m fringe_cli.cli r2band --model qm --runs 1000 --nmax 2000 --out band.csv
  python -m fringe_cli.cli ensemble --runs 10000 --out corp.csv
  python -m fringe_cli.cli lrt --events qm.csv --corp-ensemble corp.csv --out lrt.csv
  python -m fringe_cli.cli heraldscan --qwp 0:100:10 --out scan.csv
  python -m fringe_cli.cli fit --hist frames/histogram_2000.csv --out fit.csv
  python -m fringe_cli.cli oracle fresnel --out oracle.csv

Exit codes: 0 ok, 1 unexpected, 2 usage, 3 config, 4 file, 5 data.
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("simulate", parents=[common], help="Synthesize a time-tagged event log")
    p.add_argument("source", choices=["qm", "corpuscular", "entangled", "coherent"])
    p.add_argument("--photons", type=int, required=True, help="Number of signal photons")
    p.add_argument("--out", required=True, help="Event log CSV")
    p.add_argument("--port", choices=["D1", "D2"], help="Herald port of qm/corpuscular pairs")
    p.add_argument("--fidelity", type=float, help="Werner fidelity of the entangled source")
    p.add_argument("--qwp", type=angle_list, help="Idler QWP angle; the first one is used")
    p.add_argument("--hwp", type=float, help="Idler HWP angle (default: diagonal projection)")
    p.add_argument("--slits", type=int, choices=[2, 3], help="Slit count of the coherent source")
    p.add_argument("--emission", choices=["envelope", "uniform"], help="Corpuscular messenger emission")

    p = sub.add_parser("buildup", parents=[common], help="Histograms of the first N heralded detections")
    p.add_argument("--events", required=True, help="Event log CSV")
    p.add_argument("--frames", type=int_list, default=[20, 200, 2000], help="Comma list of N (default: 20,200,2000)")
    p.add_argument("--out", required=True, help="Output directory")
    p.add_argument("--port", choices=["D1", "D2"], help="Only detections heralded by this port")
    p.add_argument("--window", type=int, help="Coincidence window in ps")

    p = sub.add_parser("ensemble", parents=[common], help="Per-N click distributions of a corpuscular ensemble")
    p.add_argument("--runs", type=int, help="Independent corpuscular runs")
    p.add_argument("--nmax", type=int, help="Largest N")
    p.add_argument("--step", type=int, help="N grid step")
    p.add_argument("--emission", choices=["envelope", "uniform"], help="Messenger emission profile")
    p.add_argument("--workers", type=int, default=1, help="Worker processes (default: 1)")
    p.add_argument("--out", required=True, help="Distribution CSV")

    p = sub.add_parser("r2band", parents=[common], help="Interquartile R2 band of simulated buildups")
    p.add_argument("--model", choices=["qm", "corpuscular"], required=True)
    p.add_argument("--runs", type=int, help="Monte Carlo runs")
    p.add_argument("--nmax", type=int, help="Largest N")
    p.add_argument("--step", type=int, help="N grid step")
    p.add_argument("--threshold", type=float, help="R2 level whose crossing is reported")
    p.add_argument("--reference-photons", type=int, help="Photons in the long-run reference fit")
    p.add_argument("--emission", choices=["envelope", "uniform"], help="Messenger emission profile")
    p.add_argument("--workers", type=int, default=1, help="Worker processes (default: 1)")
    p.add_argument("--out", required=True, help="Band CSV")

    p = sub.add_parser("lrt", parents=[common], help="Log-likelihood ratio, wave pattern vs corpuscular ensemble")
    p.add_argument("--events", required=True, help="Event log CSV")
    p.add_argument("--corp-ensemble", required=True, help="Distribution CSV written by `ensemble`")
    p.add_argument("--window", type=int, help="Coincidence window in ps")
    p.add_argument("--starts", type=int, help="Fit multi-starts")
    p.add_argument("--out", required=True, help="Likelihood-ratio CSV")

    p = sub.add_parser("heraldscan", parents=[common], help="Heralded visibility and phase over QWP angles")
    p.add_argument("--qwp", type=angle_list, help="START:STOP:STEP (inclusive) or comma list")
    p.add_argument("--fidelity", type=float, help="Werner fidelity")
    p.add_argument("--hwp", type=float, help="Idler HWP angle (default: diagonal projection)")
    p.add_argument("--starts", type=int, help="Fit multi-starts")
    p.add_argument("--out", required=True, help="Scan CSV")

    p = sub.add_parser("fit", parents=[common], help="Pattern fit and bootstrap visibility of a histogram")
    p.add_argument("--hist", required=True, help="Histogram CSV")
    p.add_argument("--resamples", type=int, help="Bootstrap resamples")
    p.add_argument("--starts", type=int, help="Fit multi-starts")
    p.add_argument("--out", required=True, help="Fit CSV")

    p = sub.add_parser("oracle", parents=[common], help="Reference optics tables")
    p.add_argument("kind", choices=["fresnel", "nslit"])
    p.add_argument("--slits", type=int, choices=[2, 3], help="Slit count for nslit")
    p.add_argument("--points", type=int, default=401, help="Sample points across the array (default: 401)")
    p.add_argument("--out", required=True, help="Table CSV")

    return parser


def flag_overrides(args: argparse.Namespace) -> dict:
    keys = {**COMMON_FLAG_KEYS, **FLAG_KEYS[args.command]}
    return {key: getattr(args, dest) for dest, key in keys.items()}


def _fail(category: str, error: BaseException, code: int) -> int:
    logger.error("Command failed", extra={"category": category, "error": str(error)})
    print(json.dumps({"error": category, "message": str(error)}), file=sys.stderr)
    return code


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one subcommand and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return _fail("usage", e, EXIT_USAGE)
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK

    if args.verbose:
        enable_console_output()

    try:
        config = resolve_config(args.config, flag_overrides(args))
        logger.info(
            "Running command",
            extra={"command": args.command, "seed": config.seed, "config_digest": config.digest()},
        )
        HANDLERS[args.command](args, config)
    except (ConfigParseError, ConfigValidationError, UnknownConfigKeyError) as e:
        return _fail("config", e, EXIT_CONFIG)
    except OSError as e:
        return _fail("file", e, EXIT_FILE)
    except ValueError as e:
        return _fail("data", e, EXIT_DATA)
    except Exception as e:
        logger.exception("Unexpected failure", extra={"command": args.command})
        return _fail("unexpected", e, EXIT_UNEXPECTED)
    return EXIT_OK


def main():
    """Main CLI entry point."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
