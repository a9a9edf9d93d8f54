"""Compare command implementation for usher-lab."""

from collections.abc import Sequence
from pathlib import Path
from typing import Optional

import click

from ..constants import EXIT_CONFIG_ERROR
from ..exceptions import UsherLabError
from ..harness.metrics import compare_metrics
from ..utils.fs import write_text_atomic
from ..utils.logger import success
from . import exit_with_error


def run_compare_command(paths: Sequence[Path], out_path: Optional[Path] = None) -> None:
    """Join metrics CSVs into long format, on stdout or into ``out_path``."""
    try:
        text = compare_metrics(paths)
        if out_path is None:
            click.echo(text, nl=False)
        else:
            write_text_atomic(out_path, text)
            success(f"Wrote {len(paths)} runs to {out_path}")
    except UsherLabError as e:
        exit_with_error(
            "Compare Failed",
            str(e),
            EXIT_CONFIG_ERROR,
            ["Inputs must be metrics files written by 'usher-lab train'"],
        )
