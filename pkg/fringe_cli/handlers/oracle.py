"""oracle - reference optics tables: quadrature check of the focal-plane mode, N-slit patterns."""

import argparse
import math

import numpy as np
from rich.console import Console

from formats.tables import write_columns
from models.run_config import RunConfig
from optics.fresnel_oracle import fresnel_oracle, oracle_envelope_fwhm
from optics.modes import fringe_period, focal_plane_mode
from optics.nslit import nslit_intensity
from utils.logger import get_logger

logger = get_logger("cli")
console = Console()


def _fresnel_table(config: RunConfig, points: int) -> dict:
    geometry = config.optics
    left, right = geometry.array_edges()
    x = np.linspace(left, right, points)
    scale = math.sqrt(math.pi) * geometry.w_m
    closed = np.array([scale * focal_plane_mode(xi, "+", geometry) for xi in x])
    oracle = np.array([fresnel_oracle(xi, "+", geometry) for xi in x])
    return {
        "x_m": x,
        "closed_form_abs": np.abs(closed),
        "oracle_abs": np.abs(oracle),
        "closed_form_phase": np.angle(closed),
        "oracle_phase": np.angle(oracle),
        "relative_deviation": np.abs(oracle - closed) / np.abs(closed),
    }


def _nslit_table(config: RunConfig, points: int) -> dict:
    left, right = config.optics.array_edges()
    x = np.linspace(left, right, points)
    return {"x_m": x, "intensity": nslit_intensity(x, config.slits)}


def handle_oracle(args: argparse.Namespace, config: RunConfig) -> None:
    if args.kind == "fresnel":
        columns = _fresnel_table(config, args.points)
        fwhm = oracle_envelope_fwhm(config.optics)
        logger.info(
            "Fresnel oracle evaluated",
            extra={
                "max_relative_deviation": float(columns["relative_deviation"].max()),
                "fwhm_m": fwhm,
                "fringe_period_m": fringe_period(config.optics),
            },
        )
        console.print(
            f"[dim]max deviation {columns['relative_deviation'].max():.2e}, "
            f"envelope FWHM {fwhm * 1e3:.4f} mm[/dim]"
        )
    else:
        columns = _nslit_table(config, args.points)
    write_columns(args.out, columns)
    console.print(f"✅ [bold green]{args.kind}[/bold green] table written to {args.out}")
