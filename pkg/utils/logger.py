"""Central logger access for the fringe buildup toolkit."""

import logging
import os

from utils.logging_config import configure_logging, enable_console_output, log_execution_time

_loggers = {}


def get_logger(process_name: str = "app", console_output: bool = None) -> logging.Logger:
    """
    Get the configured logger instance for a process.

    Args:
        process_name: Name of the process for log file naming (default: "app").
        console_output: Whether to also log to the console. Defaults to the
                       FRINGE_LOG_CONSOLE environment variable ("false" if unset).

    Returns:
        logging.Logger: Configured logger instance

    Example:
        >>> from utils.logger import get_logger
        >>> logger = get_logger()  # logs/app.log
        >>> logger.info("Simulation started", extra={"seed": 7})

        >>> logger = get_logger("ensemble")  # logs/ensemble.log
    """
    global _loggers
    if process_name not in _loggers:
        if console_output is None:
            console_output = os.getenv("FRINGE_LOG_CONSOLE", "false").lower() == "true"
        _loggers[process_name] = configure_logging(process_name, console_output=console_output)
    return _loggers[process_name]


__all__ = ["get_logger", "log_execution_time", "enable_console_output"]
