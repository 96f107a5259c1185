"""Resolve the run configuration: defaults < config file < environment < flags."""

import os
from typing import Any, Mapping, Optional

from formats.config import apply_overrides, load_config
from formats.errors import ConfigValidationError
from models.run_config import RunConfig

SEED_ENV = "FRINGE_SEED"


def seed_from_env() -> Optional[int]:
    raw = os.getenv(SEED_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigValidationError(f"{SEED_ENV} must be an integer, got {raw!r}") from e


def resolve_config(config_path: Optional[str], flag_overrides: Mapping[str, Any]) -> RunConfig:
    """Build the effective RunConfig.

    Args:
        config_path: JSON file, or None for the built-in defaults.
        flag_overrides: Dotted config keys set explicitly on the command line.
    """
    config = load_config(config_path) if config_path else RunConfig()
    env_seed = seed_from_env()
    if env_seed is not None:
        config = apply_overrides(config, {"seed": env_seed})
    overrides = {k: v for k, v in flag_overrides.items() if v is not None}
    return apply_overrides(config, overrides) if overrides else config
