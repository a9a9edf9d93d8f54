"""Logging for usher-lab.

Library modules log through one named logger with a rich handler. Commands
also print one-line status messages through ``success``/``info``/``warning``/
``error``.
"""

import logging
from pathlib import Path
from typing import Optional

from rich.logging import RichHandler

from ..constants import LOGGER_NAME
from ..ui.styles import COLORS, create_console

console = create_console()

_logger: Optional[logging.Logger] = None

_ICONS = {"success": "✓", "info": "ℹ", "warning": "⚠", "error": "✗"}


def get_logger() -> logging.Logger:
    """Get or create the usher-lab logger (INFO, rich console, no propagation)."""
    global _logger

    if _logger is None:
        _logger = logging.getLogger(LOGGER_NAME)
        _logger.setLevel(logging.INFO)
        if not _logger.handlers:
            handler = RichHandler(console=console, show_time=False, show_path=False, markup=True)
            handler.setLevel(logging.INFO)
            handler.setFormatter(logging.Formatter("%(message)s"))
            _logger.addHandler(handler)
            _logger.propagate = False

    return _logger


def _status_line(kind: str, message: str) -> str:
    color = COLORS[kind]
    return f"[{color}]{_ICONS[kind]} {message}[/{color}]"


def success(message: str) -> None:
    console.print(_status_line("success", message))


def info(message: str) -> None:
    console.print(_status_line("info", message))


def warning(message: str) -> None:
    console.print(_status_line("warning", message))


def error(message: str) -> None:
    """Print an error line to the stderr console."""
    from ..ui.styles import error_console

    error_console.print(_status_line("error", message))


def _has_file_handler(logger: logging.Logger) -> bool:
    return any(isinstance(handler, logging.FileHandler) for handler in logger.handlers)


def set_debug_mode(enabled: bool = True) -> None:
    """Switch console logging between DEBUG and INFO.

    A configured log file keeps receiving debug records either way.
    """
    level = logging.DEBUG if enabled else logging.INFO
    logger = get_logger()
    logger.setLevel(logging.DEBUG if _has_file_handler(logger) else level)
    for handler in logger.handlers:
        if isinstance(handler, RichHandler):
            handler.setLevel(level)


def configure_file_logging(log_file: Path) -> None:
    """Mirror every log record, debug included, into ``log_file``.

    Args:
        log_file: Path of the log file; parent directories are created.
    """
    logger = get_logger()
    log_file.parent.mkdir(parents=True, exist_ok=True)

    file_handler = logging.FileHandler(log_file, encoding="utf-8")
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(
        logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    )
    logger.addHandler(file_handler)
    logger.setLevel(logging.DEBUG)
