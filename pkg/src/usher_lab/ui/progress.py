"""Progress tracking for long training and verification runs."""

from collections.abc import Iterator
from contextlib import contextmanager
from typing import Optional

from rich.console import Console
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskID,
    TextColumn,
    TimeRemainingColumn,
)

from .styles import console


class ProgressTracker:
    """Helper class for updating progress within a context."""

    def __init__(self, progress: Optional[Progress], task_id: Optional[TaskID]) -> None:
        self.progress = progress
        self.task_id = task_id

    def advance(self, amount: float = 1.0, description: Optional[str] = None) -> None:
        """Advance the bar, optionally replacing its description."""
        if self.progress is None or self.task_id is None:
            return
        if description is None:
            self.progress.update(self.task_id, advance=amount)
        else:
            self.progress.update(self.task_id, advance=amount, description=description)


@contextmanager
def track_progress(
    description: str,
    total: Optional[float],
    *,
    enabled: bool = True,
    console_obj: Optional[Console] = None,
) -> Iterator[ProgressTracker]:
    """Context manager yielding a tracker bound to a single rich task.

    With ``enabled=False`` the tracker is a no-op so library code can call it
    unconditionally (tests and worker processes run silently).
    """
    if not enabled:
        yield ProgressTracker(None, None)
        return

    progress = Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeRemainingColumn(),
        console=console_obj or console,
        transient=True,
    )
    with progress:
        task_id = progress.add_task(description, total=total)
        yield ProgressTracker(progress, task_id)
