"""Bundled discrete environments."""

from .chains import build_chain, build_hazard_chain
from .gridmap import Cell, GridMap, default_map_path, load_grid_map, parse_grid_map
from .gridworld import GRID_ACTIONS, build_risky_gridworld, cell_index
from .red_light import RedLightConfig, build_red_light, red_light_state
from .registry import build_environment
from .torus import TorusFreezeConfig, build_torus_freeze, torus_cell

__all__ = [
    "Cell",
    "GRID_ACTIONS",
    "GridMap",
    "RedLightConfig",
    "TorusFreezeConfig",
    "build_chain",
    "build_environment",
    "build_hazard_chain",
    "build_red_light",
    "build_risky_gridworld",
    "build_torus_freeze",
    "cell_index",
    "default_map_path",
    "load_grid_map",
    "parse_grid_map",
    "red_light_state",
    "torus_cell",
]
