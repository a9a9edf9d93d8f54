"""Discrete torus with a freeze action.

The agent moves on a ``cells_per_dim ** dims`` wrap-around grid. The extra
Freeze action teleports it to a uniformly random cell and freezes it there for
the rest of the episode. Episodes start at the origin unless ``random_start``
spreads them uniformly over the unfrozen cells.
"""

from dataclasses import dataclass

import numpy as np

from ..core.mdp import MultiGoalMdp
from ..exceptions import ContractViolationError


@dataclass(frozen=True)
class TorusFreezeConfig:
    """Torus size and start law."""

    dims: int = 2
    cells_per_dim: int = 8
    random_start: bool = False

    def __post_init__(self) -> None:
        if self.dims < 1 or self.cells_per_dim < 2:
            raise ContractViolationError("torus needs dims >= 1 and cells_per_dim >= 2")

    @property
    def num_cells(self) -> int:
        return self.cells_per_dim**self.dims

    @property
    def freeze_action(self) -> int:
        return 2 * self.dims


def torus_cell(cfg: TorusFreezeConfig, coords: tuple[int, ...]) -> int:
    """Cell id of ``coords``; dimension 0 varies fastest."""
    return int(sum((c % cfg.cells_per_dim) * cfg.cells_per_dim**d for d, c in enumerate(coords)))


def torus_coords(cfg: TorusFreezeConfig, cell: int) -> tuple[int, ...]:
    return tuple((cell // cfg.cells_per_dim**d) % cfg.cells_per_dim for d in range(cfg.dims))


def build_torus_freeze(cfg: TorusFreezeConfig, horizon: int, gamma: float) -> MultiGoalMdp:
    """Build the torus MDP.

    State ``cell`` is unfrozen and ``num_cells + cell`` is the frozen copy.
    Actions ``2d`` and ``2d + 1`` move +1 and -1 along dimension ``d``; the last
    action freezes. Frozen states are terminal.
    """
    cells = cfg.num_cells
    num_states = 2 * cells
    num_actions = 2 * cfg.dims + 1

    transition = np.zeros((num_states, num_actions, num_states))
    for cell in range(cells):
        coords = torus_coords(cfg, cell)
        for d in range(cfg.dims):
            for offset, a in ((1, 2 * d), (-1, 2 * d + 1)):
                moved = list(coords)
                moved[d] += offset
                transition[cell, a, torus_cell(cfg, tuple(moved))] = 1.0
        transition[cell, cfg.freeze_action, cells:] = 1.0 / cells
        transition[cells + cell, :, cells + cell] = 1.0

    goal_map = np.concatenate([np.arange(cells), np.arange(cells)])
    start = np.zeros(num_states)
    if cfg.random_start:
        start[:cells] = 1.0 / cells
    else:
        start[0] = 1.0
    frozen = np.concatenate([np.zeros(cells, dtype=bool), np.ones(cells, dtype=bool)])
    labels = tuple(
        f"{torus_coords(cfg, s % cells)}{' frozen' if s >= cells else ''}"
        for s in range(num_states)
    )

    return MultiGoalMdp(
        name="torus_freeze",
        transition=transition,
        goal_map=goal_map,
        num_goals=cells,
        start_distribution=start,
        terminal=frozen,
        horizon=horizon,
        discount=gamma,
        policy_goals=np.arange(cells),
        flags={"frozen": frozen.copy()},
        state_labels=labels,
    )
