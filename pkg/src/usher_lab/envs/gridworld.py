"""Risky gridworld built from a ``GridMap``.

States are the non-wall cells in row-major order followed by one absorbing
fail state. Each free cell is also a goal; the fail state achieves a reserved
goal that no policy pursues.
"""

import numpy as np

from ..core.mdp import MultiGoalMdp
from ..types import PolicyGoals
from .gridmap import Cell, GridMap

GRID_ACTIONS = ("up", "down", "left", "right", "stay")
_MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1), (0, 0))


def cell_index(grid: GridMap) -> dict[tuple[int, int], int]:
    """Map each open ``(row, col)`` to its state id."""
    open_cells = [
        (row, col)
        for row in range(grid.height)
        for col in range(grid.width)
        if grid.cells[row][col] is not Cell.WALL
    ]
    return {position: index for index, position in enumerate(open_cells)}


def build_risky_gridworld(
    grid: GridMap,
    horizon: int,
    gamma: float,
    policy_goals: PolicyGoals = PolicyGoals.FREE,
) -> MultiGoalMdp:
    """Build the gridworld MDP.

    Moves into walls or off the map leave the agent in place. Entering a hazard
    cell from another cell ends in the fail state with ``grid.hazard_stop_prob``.

    Args:
        grid: Parsed map
        horizon: Episode length
        gamma: Discount factor
        policy_goals: Pursue every free cell or only the marked goals

    Returns:
        The MultiGoalMdp
    """
    index = cell_index(grid)
    num_cells = len(index)
    fail = num_cells
    num_states = num_cells + 1

    transition = np.zeros((num_states, len(GRID_ACTIONS), num_states))
    for (row, col), s in index.items():
        for a, (d_row, d_col) in enumerate(_MOVES):
            target = (row + d_row, col + d_col)
            if not grid.is_open(*target):
                target = (row, col)
            s_next = index[target]
            if grid[target] is Cell.HAZARD and target != (row, col):
                transition[s, a, fail] = grid.hazard_stop_prob
                transition[s, a, s_next] += 1.0 - grid.hazard_stop_prob
            else:
                transition[s, a, s_next] = 1.0
    transition[fail, :, fail] = 1.0

    goal_map = np.arange(num_states)
    start = np.zeros(num_states)
    start[index[grid.start]] = 1.0
    terminal = np.zeros(num_states, dtype=bool)
    terminal[fail] = True

    if policy_goals is PolicyGoals.MARKED:
        pursued = [index[position] for position in grid.positions(Cell.GOAL)]
    else:
        pursued = list(range(num_cells))

    hazard = np.zeros(num_states, dtype=bool)
    for position in grid.positions(Cell.HAZARD):
        hazard[index[position]] = True
    labels = tuple(f"({row},{col})" for row, col in index) + ("fail",)

    return MultiGoalMdp(
        name="risky_gridworld",
        transition=transition,
        goal_map=goal_map,
        num_goals=num_states,
        start_distribution=start,
        terminal=terminal,
        horizon=horizon,
        discount=gamma,
        policy_goals=np.array(pursued),
        flags={"hazard": hazard, "fail": terminal.copy()},
        state_labels=labels,
    )
