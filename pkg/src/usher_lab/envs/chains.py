"""Small chain MDPs used by the oracles and the verification suite."""

import numpy as np

from ..constants import DEFAULT_HAZARD_STOP_PROB
from ..core.mdp import MultiGoalMdp
from ..exceptions import ContractViolationError

CHAIN_ACTIONS = ("right", "left", "stay")
HAZARD_CHAIN_ACTIONS = ("advance", "stay")

HAZARD_START, HAZARD_MID, HAZARD_GOAL, HAZARD_FAIL = range(4)


def build_chain(length: int, horizon: int, gamma: float, slip_prob: float = 0.0) -> MultiGoalMdp:
    """Corridor of ``length`` states starting at the left end.

    ``right`` and ``left`` succeed with ``1 - slip_prob`` and otherwise leave
    the agent in place; moves past either end are no-ops. Every state is its own
    goal and the rightmost state is the pursued goal.
    """
    if length < 2:
        raise ContractViolationError("chain needs at least two states")
    if not 0.0 <= slip_prob < 1.0:
        raise ContractViolationError("slip_prob must lie in [0, 1)")

    transition = np.zeros((length, len(CHAIN_ACTIONS), length))
    for s in range(length):
        for a, step in enumerate((1, -1)):
            target = min(max(s + step, 0), length - 1)
            transition[s, a, target] += 1.0 - slip_prob
            transition[s, a, s] += slip_prob
        transition[s, 2, s] = 1.0

    start = np.zeros(length)
    start[0] = 1.0
    return MultiGoalMdp(
        name="chain",
        transition=transition,
        goal_map=np.arange(length),
        num_goals=length,
        start_distribution=start,
        terminal=np.zeros(length, dtype=bool),
        horizon=horizon,
        discount=gamma,
        policy_goals=np.array([length - 1]),
        state_labels=tuple(f"c{s}" for s in range(length)),
    )


def build_hazard_chain(
    horizon: int, gamma: float, stop_prob: float = DEFAULT_HAZARD_STOP_PROB
) -> MultiGoalMdp:
    """Four-state hazard corridor: start, mid, goal, fail.

    Advancing from start reaches mid with ``1 - stop_prob`` and the absorbing
    fail state otherwise; advancing from mid reaches the goal. ``stay`` is
    always a no-op.
    """
    if not 0.0 <= stop_prob <= 1.0:
        raise ContractViolationError("stop_prob must lie in [0, 1]")

    transition = np.zeros((4, len(HAZARD_CHAIN_ACTIONS), 4))
    transition[HAZARD_START, 0, HAZARD_MID] = 1.0 - stop_prob
    transition[HAZARD_START, 0, HAZARD_FAIL] = stop_prob
    transition[HAZARD_MID, 0, HAZARD_GOAL] = 1.0
    transition[HAZARD_GOAL, 0, HAZARD_GOAL] = 1.0
    for s in range(4):
        transition[s, 1, s] = 1.0
    transition[HAZARD_FAIL, :, HAZARD_FAIL] = 1.0

    start = np.zeros(4)
    start[HAZARD_START] = 1.0
    terminal = np.zeros(4, dtype=bool)
    terminal[HAZARD_FAIL] = True
    return MultiGoalMdp(
        name="hazard_chain",
        transition=transition,
        goal_map=np.arange(4),
        num_goals=4,
        start_distribution=start,
        terminal=terminal,
        horizon=horizon,
        discount=gamma,
        policy_goals=np.array([HAZARD_GOAL]),
        flags={"fail": terminal.copy()},
        state_labels=("start", "mid", "goal", "fail"),
    )
