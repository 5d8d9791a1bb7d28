"""Rich logging for the CLI.

Reports (JSON, CSV, the audit table) own stdout, so every log record goes to
stderr. Library modules log under the ``threshold_audit`` namespace and never
configure handlers themselves.
"""

from __future__ import annotations

import logging

from rich.console import Console
from rich.logging import RichHandler

ROOT_LOGGER = "threshold_audit"


def _resolve_level(level: str) -> int:
    resolved = logging.getLevelName(level.upper())
    return resolved if isinstance(resolved, int) else logging.INFO


def setup_logging(level: str = "INFO") -> None:
    """Install one RichHandler on a stderr console, replacing earlier handlers.

    Called once per CLI run after the config is known; an unknown level name
    falls back to INFO.
    """
    handler = RichHandler(
        console=Console(stderr=True),
        rich_tracebacks=False,
        show_level=True,
        show_time=True,
    )
    logging.basicConfig(
        level=_resolve_level(level),
        format="%(message)s",
        handlers=[handler],
        force=True,
    )


def get_logger(name: str | None = None) -> logging.Logger:
    """Logger below ``threshold_audit``; bare names are prefixed."""
    if name and not name.startswith(ROOT_LOGGER):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name or ROOT_LOGGER)
