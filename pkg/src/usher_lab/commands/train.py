"""Train command implementation for usher-lab."""

from collections.abc import Sequence
from pathlib import Path
from typing import Optional

from ..constants import EXIT_CONFIG_ERROR, EXIT_INTERRUPTED
from ..exceptions import UsherLabError
from ..harness.config import apply_overrides, load_config, resolve_config_path
from ..harness.metrics import RunMetrics
from ..harness.training import run_seeds, seed_config
from ..types import ExperimentConfig
from ..ui.styles import console, create_table
from ..utils.logger import info, success, warning
from . import exit_with_error


def parse_seed_list(text: str) -> list[int]:
    """Parse ``"0,1,2"`` or ``"0-4"`` (inclusive) or a mix of both.

    Raises:
        ValueError: On malformed items or a descending range
    """
    seeds: list[int] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        low, dash, high = item.partition("-")
        if dash:
            start, stop = int(low), int(high)
            if stop < start:
                raise ValueError(f"descending seed range '{item}'")
            seeds.extend(range(start, stop + 1))
        else:
            seeds.append(int(item))
    if not seeds:
        raise ValueError("empty seed list")
    return seeds


def show_run_summary(config: ExperimentConfig, runs: Sequence[RunMetrics]) -> None:
    """Print the final evaluation row of every run."""
    table = create_table(
        title=f"{config.agent.kind.value} on {config.env.kind.value}",
        columns=["Seed", "Episodes", "Success", "Return", "Bias", "CSV"],
    )
    for metrics in runs:
        csv_path = seed_config(config, metrics.seed, len(runs) > 1).csv_path()
        if metrics.rows:
            last = metrics.final
            table.add_row(
                str(metrics.seed),
                str(last.episode),
                f"{last.success_rate:.3f}",
                f"{last.avg_return:.4f}",
                f"{last.bias_start:+.4f} ± {last.bias_ci:.4f}",
                str(csv_path),
            )
        else:
            table.add_row(str(metrics.seed), "0", "-", "-", "-", str(csv_path))
    console.print(table)


def run_train_command(
    config_refs: Sequence[str],
    seed: Optional[int] = None,
    out_dir: Optional[Path] = None,
    seeds: Optional[str] = None,
    workers: int = 1,
) -> None:
    """Train every experiment in ``config_refs``.

    Args:
        config_refs: Experiment file paths or bundled config names
        seed: Override for ``train.seed``
        out_dir: Override for ``output.directory``
        seeds: Seed list (``"0-4"``, ``"1,3"``) run as isolated processes
        workers: Worker processes used for a seed list
    """
    try:
        seed_list = parse_seed_list(seeds) if seeds else None
        configs = []
        for ref in config_refs:
            path = resolve_config_path(ref)
            configs.append((path, apply_overrides(load_config(path), seed, out_dir)))

        for path, config in configs:
            run_list = seed_list or [config.train.seed]
            info(
                f"Training {config.agent.kind.value} on {config.env.kind.value} "
                f"({config.train.episodes} episodes, seeds {', '.join(map(str, run_list))})"
            )
            if config.train.episodes == 0:
                warning(f"{path.name} trains for 0 episodes; its CSV will hold only the header")
            runs = run_seeds(config, run_list, workers=workers)
            show_run_summary(config, runs)
            success(f"Finished {path.name}")
    except UsherLabError as e:
        exit_with_error(
            "Training Failed",
            str(e),
            EXIT_CONFIG_ERROR,
            ["Check the experiment file against docs/configuration.md"],
        )
    except ValueError as e:
        exit_with_error(
            "Invalid Seeds",
            str(e),
            EXIT_CONFIG_ERROR,
            ["Use e.g. --seeds 0-4 or --seeds 0,2,5"],
        )
    except KeyboardInterrupt:
        exit_with_error("Training Cancelled", "Interrupted by user", EXIT_INTERRUPTED)
