"""Discrete red-light corridor.

The agent drives along ``road_length`` cells towards the last one. A traffic
light at ``intersection_cell`` cycles green, yellow, red with one phase step per
environment step. Being in the intersection cell right after a step that lands
on a red phase crashes the car with ``crash_prob``.
"""

from dataclasses import dataclass

import numpy as np

from ..constants import DEFAULT_CRASH_PROB, DEFAULT_PHASE_LENGTHS
from ..core.mdp import MultiGoalMdp
from ..exceptions import ContractViolationError

RED_LIGHT_ACTIONS = ("forward", "stay")
FORWARD, STAY = 0, 1


@dataclass(frozen=True)
class RedLightConfig:
    """Corridor layout and light timing."""

    road_length: int = 6
    intersection_cell: int = 3
    phase_lengths: tuple[int, int, int] = DEFAULT_PHASE_LENGTHS
    crash_prob: float = DEFAULT_CRASH_PROB
    random_initial_phase: bool = True

    def __post_init__(self) -> None:
        if self.road_length < 2:
            raise ContractViolationError("road_length must be at least 2")
        if not 0 <= self.intersection_cell < self.road_length:
            raise ContractViolationError("intersection_cell must lie on the road")
        if len(self.phase_lengths) != 3 or min(self.phase_lengths) < 1:
            raise ContractViolationError("phase_lengths needs three lengths of at least 1")
        if not 0.0 <= self.crash_prob <= 1.0:
            raise ContractViolationError("crash_prob must lie in [0, 1]")

    @property
    def period(self) -> int:
        return sum(self.phase_lengths)

    def is_red(self, timer: int) -> bool:
        green, yellow, _ = self.phase_lengths
        return timer % self.period >= green + yellow

    def phase_name(self, timer: int) -> str:
        green, yellow, _ = self.phase_lengths
        timer %= self.period
        if timer < green:
            return "green"
        return "yellow" if timer < green + yellow else "red"


def red_light_state(cfg: RedLightConfig, cell: int, timer: int) -> int:
    """State id of the car at ``cell`` with light timer ``timer``."""
    return cell * cfg.period + timer % cfg.period


def build_red_light(cfg: RedLightConfig, horizon: int, gamma: float) -> MultiGoalMdp:
    """Build the corridor MDP.

    States are ``(cell, timer)`` pairs plus an absorbing crash state; the goal
    map forgets the timer and the crash state has its own reserved goal. The
    ``red_violation`` flag marks the intersection on red and the crash state.
    """
    period = cfg.period
    num_states = cfg.road_length * period + 1
    crash = num_states - 1
    last = cfg.road_length - 1

    transition = np.zeros((num_states, len(RED_LIGHT_ACTIONS), num_states))
    goal_map = np.empty(num_states, dtype=np.int64)
    violation = np.zeros(num_states, dtype=bool)
    labels = []
    for cell in range(cfg.road_length):
        for timer in range(period):
            s = red_light_state(cfg, cell, timer)
            goal_map[s] = cell
            labels.append(f"cell {cell} {cfg.phase_name(timer)}@{timer}")
            if cell == cfg.intersection_cell and cfg.is_red(timer):
                violation[s] = True
            for a in (FORWARD, STAY):
                next_cell = min(cell + 1, last) if a == FORWARD else cell
                next_timer = (timer + 1) % period
                s_next = red_light_state(cfg, next_cell, next_timer)
                if next_cell == cfg.intersection_cell and cfg.is_red(next_timer):
                    transition[s, a, crash] = cfg.crash_prob
                    transition[s, a, s_next] += 1.0 - cfg.crash_prob
                else:
                    transition[s, a, s_next] = 1.0
    transition[crash, :, crash] = 1.0
    goal_map[crash] = cfg.road_length
    # a crash only follows entering the intersection on red
    violation[crash] = True
    labels.append("crash")

    start = np.zeros(num_states)
    if cfg.random_initial_phase:
        start[[red_light_state(cfg, 0, timer) for timer in range(period)]] = 1.0 / period
    else:
        start[red_light_state(cfg, 0, 0)] = 1.0
    terminal = np.zeros(num_states, dtype=bool)
    terminal[crash] = True

    return MultiGoalMdp(
        name="red_light",
        transition=transition,
        goal_map=goal_map,
        num_goals=cfg.road_length + 1,
        start_distribution=start,
        terminal=terminal,
        horizon=horizon,
        discount=gamma,
        policy_goals=np.array([last]),
        flags={"red_violation": violation, "fail": terminal.copy()},
        state_labels=tuple(labels),
    )
