"""Rich console components for usher-lab commands."""

from .progress import ProgressTracker, track_progress
from .styles import (
    COLORS,
    console,
    create_console,
    create_error_banner,
    create_panel,
    create_table,
    error_console,
    style_status,
    style_verdict,
)

__all__ = [
    "COLORS",
    "ProgressTracker",
    "console",
    "create_console",
    "create_error_banner",
    "create_panel",
    "create_table",
    "error_console",
    "style_status",
    "style_verdict",
    "track_progress",
]
