"""Command implementations for usher-lab.

Each module exposes a ``run_<name>_command`` function that ``cli.py`` calls
after option parsing.
"""

import sys
from typing import NoReturn, Optional

from ..ui.styles import create_error_banner, error_console


def exit_with_error(
    title: str,
    message: str,
    code: int,
    suggestions: Optional[list[str]] = None,
) -> NoReturn:
    """Print an error banner to stderr and terminate with ``code``."""
    error_console.print(create_error_banner(title=title, message=message, suggestions=suggestions))
    sys.exit(code)
