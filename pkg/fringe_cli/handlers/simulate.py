"""simulate - synthesize a time-tagged event log for one photon source."""

import argparse

import numpy as np
from rich.console import Console

from corpuscular.ensemble import simulate_corpuscular
from formats.events import EventLog, write_events
from models.qubit import PORTS, PathQubit
from models.run_config import RunConfig
from montecarlo.sampling import sample_pixels
from montecarlo.seeding import SeedStream
from montecarlo.timeline import timeline
from optics.nslit import nslit_distribution
from optics.pixels import pixel_distribution
from polarization.heralding import entangled_state, herald_outcomes, heralded_distribution
from utils.logger import get_logger

logger = get_logger("cli")
console = Console()


def _entangled_pixels(config: RunConfig, n: int, seeds: SeedStream) -> tuple[np.ndarray, list[str]]:
    """Pixels and herald ports of heralded array detections from the Werner source.

    A port is chosen with probability proportional to its herald probability
    times the array acceptance of the state it prepares.
    """
    pol = config.polarization
    outcomes = herald_outcomes(entangled_state(pol.fidelity), pol.qwp_angles_deg[0], pol.hwp_angle_deg)
    dists = [heralded_distribution(o, config.optics) for o in outcomes]
    weights = np.array([o.probability * d.acceptance for o, d in zip(outcomes, dists)])
    rng = seeds.generator("simulate_entangled")
    port_index = (rng.random(n) >= weights[0] / weights.sum()).astype(np.int64)
    pixels = np.zeros(n, dtype=np.int64)
    for i, dist in enumerate(dists):
        chosen = port_index == i
        pixels[chosen] = sample_pixels(dist, int(chosen.sum()), seeds.generator("simulate_entangled_pixels", i))
    return pixels, [PORTS[i] for i in port_index]


def handle_simulate(args: argparse.Namespace, config: RunConfig) -> None:
    """Sample ``--photons`` detections, place them in time and write the event log."""
    n = args.photons
    geometry = config.optics
    seeds = SeedStream(config.seed)
    ports = config.polarization.herald_port

    if args.source == "qm":
        dist = pixel_distribution(PathQubit.equal_superposition(), geometry)
        pixels = sample_pixels(dist, n, seeds.generator("simulate_qm"))
    elif args.source == "corpuscular":
        corp = config.corpuscular
        pixels = simulate_corpuscular(
            n,
            corp.dlm_params(),
            geometry,
            seeds.seed("simulate_corpuscular"),
            corp.emission,
            corp.max_messengers_per_click,
        ).pixels
    elif args.source == "entangled":
        pixels, ports = _entangled_pixels(config, n, seeds)
    else:
        # attenuated laser through a physical slit array: nothing heralds it
        pixels = sample_pixels(nslit_distribution(config.slits, geometry), n, seeds.generator("simulate_coherent"))
        ports = None

    events = timeline(pixels, config.rates, seeds.seed("timeline"), geometry.n_pixels, ports)
    write_events(args.out, EventLog(events=events, seed=config.seed, config=config))
    logger.info(
        "Simulated event log",
        extra={"source": args.source, "photons": n, "n_events": len(events), "out": args.out},
    )
    console.print(f"✅ [bold green]{len(events)} events[/bold green] ({args.source}) written to {args.out}")
