"""Rich-backed logging for the feasregion package.

Library modules call :func:`get_logger` and never configure handlers; the
CLI (or a script) calls :func:`setup_logging` once.
"""

import logging
from typing import Optional, Union

from rich.console import Console
from rich.logging import RichHandler

ROOT_LOGGER = "feasregion"

# Log records go to stderr so command output on stdout stays clean
console = Console(stderr=True)


def _resolve_level(level: Union[int, str, None]) -> int:
    if level is None:
        from feasregion.config import get_settings

        level = get_settings().LOG_LEVEL
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(level.upper())
    return resolved if isinstance(resolved, int) else logging.INFO


def setup_logging(
    level: Union[int, str, None] = None,
    log_file: Optional[str] = None,
) -> logging.Logger:
    """Attach a Rich console handler (and optionally a file handler) to the package logger.

    Args:
        level: Level as an int or a name such as ``"DEBUG"``; defaults to
            ``FEASREGION_LOG_LEVEL``
        log_file: Optional path receiving a plain-text copy of every record

    Returns:
        The ``feasregion`` logger
    """
    level = _resolve_level(level)
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level)
    logger.handlers.clear()
    logger.propagate = False

    handler = RichHandler(console=console, show_time=True, show_path=False, rich_tracebacks=True)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)-8s %(name)s: %(message)s")
        )
        logger.addHandler(file_handler)

    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """``feasregion.<name>``, or the package logger itself."""
    return logging.getLogger(f"{ROOT_LOGGER}.{name}" if name else ROOT_LOGGER)


def init_default_logging(level: Union[int, str, None] = None) -> None:
    """Console logging at ``level`` (``FEASREGION_LOG_LEVEL`` when omitted)."""
    setup_logging(level=level)
