# main.py
# -----------------------------------------------------------------------------
# Command-line entry point:
#     fpimpulse <command> --config <path> --out <dir> [--seed N]
# Exit codes: 0 ok, 1 config/input, 2 numerical stability,
#             3 non-convergence, 4 I/O.
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Optional

import click

from ..core.config import VERSION
from ..core.errors import FpImpulseError
from ..core.logging_setup import configure_logging
from .run_config import COMMANDS, load_config
from .runner import run

logger = logging.getLogger(__name__)


def execute(command: str, config_path: Path, out_dir: Path, seed: Optional[int] = None) -> int:
    """Load, check and run one configuration; returns the process exit code."""
    try:
        config = load_config(config_path)
    except FpImpulseError as e:
        logger.error(f"{e}")
        return e.exit_code
    if config.command != command:
        logger.error(f"config {config_path} is for {config.command!r}, not {command!r}")
        return 1
    if seed is not None:
        config = config.with_seed(seed)
    return run(config, out_dir)


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("command", type=click.Choice(COMMANDS))
@click.option("--config", "config_path", required=True, type=click.Path(path_type=Path),
              help="JSON run configuration.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False, path_type=Path),
              help="Directory receiving the artifacts.")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Override the configured seed.")
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              help="Override the logging.conf level.")
@click.version_option(VERSION, prog_name="fpimpulse")
def cli(command: str, config_path: Path, out_dir: Path, seed: Optional[int], log_level: Optional[str]) -> None:
    """Growth calibration and impulse-control optimization for two-habitat fish populations."""
    configure_logging(log_level)
    sys.exit(execute(command, config_path, out_dir, seed))


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
