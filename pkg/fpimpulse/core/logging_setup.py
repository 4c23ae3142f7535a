# logging_setup.py
# -----------------------------------------------------------------------------
# Logging bootstrap for the CLI and scripts.
# - Loads configuration/application/logging.conf when present.
# - Falls back to basicConfig with the same line format.
# - FPIMPULSE_LOG_LEVEL or an explicit level overrides the root level.
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
import logging.config
from pathlib import Path
from typing import Optional

from .config import LOG_CONF, LOG_LEVEL

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

def configure_logging(level: Optional[str] = None, conf_path: Path = LOG_CONF) -> None:
    """
    Configure root logging once per process.

    Args:
        level: Level name overriding the file's root level (e.g. "DEBUG").
        conf_path: INI file in logging.config.fileConfig format.
    """
    if conf_path.is_file():
        logging.config.fileConfig(conf_path, disable_existing_loggers=False)
    else:
        logging.basicConfig(format=LOG_FORMAT, datefmt=DATE_FORMAT, level=logging.INFO)

    override = level or LOG_LEVEL
    if override:
        for name in ("", "fpimpulse"):
            logging.getLogger(name).setLevel(override.upper())
    logging.getLogger(__name__).debug(f"logging configured from {conf_path}")
