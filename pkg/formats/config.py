"""JSON run configuration: loading, saving and dotted-key overrides."""

import json
from pathlib import Path
from typing import Any, Mapping, Union

from pydantic import ValidationError

from formats.errors import ConfigParseError, ConfigValidationError, UnknownConfigKeyError
from models.run_config import RunConfig
from utils.logger import get_logger

logger = get_logger()


def _describe(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in error.errors()
    )


def validate_config(data: Mapping[str, Any]) -> RunConfig:
    """Build a RunConfig; missing keys take their defaults.

    Raises:
        UnknownConfigKeyError: for any key the model does not define.
        ConfigValidationError: for out-of-range or mistyped values.
    """
    if not isinstance(data, Mapping):
        raise ConfigParseError("configuration must be a JSON object")
    try:
        return RunConfig.model_validate(dict(data))
    except ValidationError as e:
        unknown = [e_ for e_ in e.errors() if e_["type"] == "extra_forbidden"]
        if unknown:
            keys = [".".join(str(p) for p in u["loc"]) for u in unknown]
            raise UnknownConfigKeyError(f"unknown configuration keys: {', '.join(keys)}") from e
        raise ConfigValidationError(_describe(e)) from e


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read a JSON configuration file.

    Raises:
        OSError: if the file cannot be read.
        ConfigParseError: if the text is not a JSON object.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigParseError(f"{path}: {e}") from e
    config = validate_config(data)
    logger.info("Loaded configuration", extra={"path": str(path), "digest": config.digest()})
    return config


def save_config(config: RunConfig, path: Union[str, Path]) -> None:
    text = json.dumps(config.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def apply_overrides(config: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    """Set dotted keys (``"optics.waist_w_mm"``) and revalidate the whole tree."""
    data = config.model_dump(mode="json")
    for dotted, value in overrides.items():
        node = data
        *parents, leaf = dotted.split(".")
        for key in parents:
            if not isinstance(node.get(key), dict):
                raise UnknownConfigKeyError(f"unknown configuration key: {dotted}")
            node = node[key]
        if leaf not in node:
            raise UnknownConfigKeyError(f"unknown configuration key: {dotted}")
        node[leaf] = value
    return validate_config(data)
