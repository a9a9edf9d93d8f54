"""Oracle command implementation for usher-lab."""

from pathlib import Path
from typing import Optional

import numpy as np

from ..constants import EXIT_CONFIG_ERROR, EXIT_INTERRUPTED
from ..envs.registry import build_environment
from ..exceptions import UsherLabError
from ..harness.config import apply_overrides, load_config, resolve_config_path
from ..harness.suite import optimal_policy
from ..oracle.dp import bellman_residual, exact_successor_density, value_iteration
from ..ui.styles import console, create_table
from ..utils.logger import info, success
from . import exit_with_error


def dump_oracle_tables(
    config_ref: str,
    goal: Optional[int] = None,
    out_dir: Optional[Path] = None,
) -> Path:
    """Solve an experiment's environment exactly and write the tables.

    Writes ``qstar.npz`` and one ``fstar_g<g>.npz`` per pursued goal, the
    latter under the time-dependent optimal policy.

    Args:
        config_ref: Experiment file path or bundled config name
        goal: Restrict both tables to one goal
        out_dir: Destination; ``<output.directory>/oracle`` by default

    Returns:
        The directory written to
    """
    config = apply_overrides(load_config(resolve_config_path(config_ref)), out_dir=out_dir)
    mdp = build_environment(config.env)
    target = out_dir or config.output.directory / "oracle"

    exact = value_iteration(mdp, goal=goal)
    info(f"Solved {exact.goals.size} goals, Bellman residual {bellman_residual(mdp, exact):.3g}")
    exact.dump(target / "qstar.npz")

    policy = optimal_policy(mdp)
    goals = mdp.policy_goals if goal is None else np.array([goal])
    start_values = exact.start_values(mdp.num_goals) if goal is None else None
    table = create_table(title="Optimal start values", columns=["Goal", "V*(start)", "Table"])
    for g_p in (int(g) for g in goals):
        path = target / f"fstar_g{g_p}.npz"
        exact_successor_density(mdp, policy, g_p).dump(path)
        if start_values is not None:
            value = float(mdp.start_distribution @ start_values[:, g_p])
        else:
            value = float(mdp.start_distribution @ exact.values[exact.horizon, 0].max(axis=1))
        table.add_row(str(g_p), f"{value:.4f}", path.name)
    console.print(table)
    return target


def run_oracle_command(
    config_ref: str,
    goal: Optional[int] = None,
    out_dir: Optional[Path] = None,
) -> None:
    """Dump exact ``Q*`` and ``f*`` tables for an experiment's environment."""
    try:
        target = dump_oracle_tables(config_ref, goal, out_dir)
        success(f"Oracle tables written to {target}")
    except UsherLabError as e:
        exit_with_error("Oracle Failed", str(e), EXIT_CONFIG_ERROR)
    except KeyboardInterrupt:
        exit_with_error("Oracle Cancelled", "Interrupted by user", EXIT_INTERRUPTED)
