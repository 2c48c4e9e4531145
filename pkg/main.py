"""
main.py — Entry point for the slope gap calculator.

Configures logging (stderr, so stdout carries only data) and hands over to
the click command group in slopegap.cli.
"""

import logging
import sys

from slopegap import config
from slopegap.cli import cli


# ── Logging setup ─────────────────────────────────────────────────────────────

def configure_logging() -> None:
    """Set up root logger with the shared format and the configured level."""
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.INFO),
        format="%(asctime)s | %(levelname)-8s | %(name)s — %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


# ── Main ──────────────────────────────────────────────────────────────────────

def main() -> None:
    configure_logging()
    cli(prog_name="slopegap")


if __name__ == "__main__":
    main()
