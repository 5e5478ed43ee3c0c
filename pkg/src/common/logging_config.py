"""Logging configuration for afford3d.

One root configuration per process; modules log through
``logging.getLogger(__name__)``.
"""

import logging
import sys
from typing import Iterable

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Third-party loggers held at WARNING
QUIET_LOGGERS = ("sklearn", "matplotlib", "PIL")


def configure_logging(level: str = "INFO", quiet: Iterable[str] = QUIET_LOGGERS) -> None:
    """
    Configure the root logger for afford3d.

    Args:
        level: Log level name (DEBUG, INFO, WARNING, ERROR, CRITICAL); unknown names fall back to INFO
        quiet: Logger names capped at WARNING
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)

    logging.basicConfig(
        level=numeric_level,
        format=LOG_FORMAT,
        datefmt=DATE_FORMAT,
        handlers=[logging.StreamHandler(sys.stdout)],
        force=True,
    )
    for name in quiet:
        logging.getLogger(name).setLevel(logging.WARNING)

    logging.getLogger(__name__).debug(f"Logging configured at {logging.getLevelName(numeric_level)} level")
