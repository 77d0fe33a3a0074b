"""Logging configuration for conelab."""

import logging
import sys
from pathlib import Path

from src.config import config


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_level = logging.getLevelName(config.logging.level.upper())
if not isinstance(_level, int):
    _level = logging.INFO


def get_logger(name: str, log_file: str | None = None) -> logging.Logger:
    """Get a configured logger instance.

    Diagnostics go to stderr; stdout carries JSON reports only.

    Args:
        name: Logger name (usually __name__)
        log_file: Optional file path for file logging

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    if logger.handlers:
        return logger

    logger.setLevel(_level)
    logger.propagate = False

    formatter = logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = log_file or config.logging.log_file
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_level(level: int) -> None:
    """Apply a log level to every conelab logger created so far and later."""
    global _level
    _level = level
    for name, existing in logging.Logger.manager.loggerDict.items():
        if name.startswith("src") and isinstance(existing, logging.Logger):
            existing.setLevel(level)
