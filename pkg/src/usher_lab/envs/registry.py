"""Build the environment named by an experiment's env section."""

from pathlib import Path
from typing import Optional

from ..core.mdp import MultiGoalMdp
from ..types import EnvKind, EnvSection
from ..utils.logger import get_logger
from .chains import build_chain, build_hazard_chain
from .gridmap import GridMap, default_map_path, load_grid_map, parse_grid_map
from .gridworld import build_risky_gridworld
from .red_light import RedLightConfig, build_red_light
from .torus import TorusFreezeConfig, build_torus_freeze


def resolve_grid_map(section: EnvSection, base_dir: Optional[Path] = None) -> GridMap:
    """Load the map an env section refers to.

    Relative ``map_path`` values resolve against ``base_dir``.
    """
    if section.map_text is not None:
        return parse_grid_map(section.map_text, section.hazard_stop_prob)
    path = section.map_path or default_map_path()
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    return load_grid_map(path, section.hazard_stop_prob)


def build_environment(section: EnvSection, base_dir: Optional[Path] = None) -> MultiGoalMdp:
    """Construct the MDP described by ``section``.

    Args:
        section: Validated env section
        base_dir: Directory used to resolve a relative map path

    Returns:
        The immutable MultiGoalMdp
    """
    logger = get_logger()
    if section.kind is EnvKind.RISKY_GRIDWORLD:
        grid = resolve_grid_map(section, base_dir)
        mdp = build_risky_gridworld(grid, section.horizon, section.gamma, section.policy_goals)
    elif section.kind is EnvKind.RED_LIGHT:
        cfg = RedLightConfig(
            road_length=section.road_length,
            intersection_cell=section.intersection_cell,
            phase_lengths=section.phase_lengths,
            crash_prob=section.crash_prob,
            random_initial_phase=section.random_initial_phase,
        )
        mdp = build_red_light(cfg, section.horizon, section.gamma)
    elif section.kind is EnvKind.TORUS_FREEZE:
        cfg_torus = TorusFreezeConfig(
            dims=section.dims,
            cells_per_dim=section.cells_per_dim,
            random_start=section.random_start,
        )
        mdp = build_torus_freeze(cfg_torus, section.horizon, section.gamma)
    elif section.kind is EnvKind.HAZARD_CHAIN:
        mdp = build_hazard_chain(section.horizon, section.gamma, section.hazard_stop_prob)
    else:
        mdp = build_chain(section.chain_length, section.horizon, section.gamma, section.slip_prob)

    logger.debug(
        f"Built {mdp.name}: {mdp.num_states} states, {mdp.num_actions} actions, "
        f"{mdp.num_goals} goals"
    )
    return mdp
