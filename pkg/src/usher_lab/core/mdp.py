"""Enumerable multi-goal MDPs.

A ``MultiGoalMdp`` carries the full transition tensor ``P[s, a, s']`` together
with the goal map ``phi``. Rewards are sparse: arriving in ``s'`` pays 1 for
goal ``g`` exactly when ``phi(s') == g``. Instances are immutable once built;
every array is stored read-only so environments, learners and oracles can share
one object freely.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from ..constants import ROW_SUM_TOLERANCE
from ..exceptions import ContractViolationError
from .rng import Rng


def _frozen(array: np.ndarray, dtype: type) -> np.ndarray:
    copy = np.array(array, dtype=dtype, copy=True)
    copy.setflags(write=False)
    return copy


@dataclass(frozen=True, eq=False)
class MultiGoalMdp:
    """Finite stochastic environment with a goal map.

    Attributes:
        name: Short identifier used in logs and metrics
        transition: ``(S, A, S)`` tensor of next-state probabilities
        goal_map: ``(S,)`` goal id achieved in each state
        num_goals: Size of the goal space
        start_distribution: ``(S,)`` initial state law
        terminal: ``(S,)`` flags for states that end every episode
        horizon: Episode length
        discount: Discount factor
        policy_goals: Goal ids that may be pursued as ``g_p``
        flags: Named boolean state masks reported by evaluation
        state_labels: Optional human-readable state names
    """

    name: str
    transition: np.ndarray
    goal_map: np.ndarray
    num_goals: int
    start_distribution: np.ndarray
    terminal: np.ndarray
    horizon: int
    discount: float
    policy_goals: np.ndarray
    flags: Mapping[str, np.ndarray] = field(default_factory=dict)
    state_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        transition = _frozen(self.transition, np.float64)
        if transition.ndim != 3 or transition.shape[0] != transition.shape[2]:
            raise ContractViolationError(
                f"transition must have shape (S, A, S), got {transition.shape}"
            )
        num_states = transition.shape[0]

        goal_map = _frozen(self.goal_map, np.int64)
        start = _frozen(self.start_distribution, np.float64)
        terminal = _frozen(self.terminal, np.bool_)
        policy_goals = _frozen(np.unique(self.policy_goals), np.int64)

        if goal_map.shape != (num_states,) or start.shape != (num_states,):
            raise ContractViolationError(
                "goal_map and start_distribution need one entry per state"
            )
        if terminal.shape != (num_states,):
            raise ContractViolationError("terminal needs one flag per state")
        if self.num_goals < 1 or goal_map.min() < 0 or goal_map.max() >= self.num_goals:
            raise ContractViolationError("goal_map must be total onto [0, num_goals)")
        goals_in_range = policy_goals.size > 0 and (
            policy_goals.min() >= 0 and policy_goals.max() < self.num_goals
        )
        if not goals_in_range:
            raise ContractViolationError("policy_goals must be a non-empty subset of the goals")
        if self.horizon < 1:
            raise ContractViolationError("horizon must be positive")
        if not 0.0 <= self.discount <= 1.0:
            raise ContractViolationError("discount must lie in [0, 1]")

        if (transition < 0).any():
            raise ContractViolationError("transition probabilities must be non-negative")
        row_error = np.abs(transition.sum(axis=2) - 1.0)
        if row_error.max() > ROW_SUM_TOLERANCE:
            s, a = np.unravel_index(int(row_error.argmax()), row_error.shape)
            raise ContractViolationError(f"transition row ({s}, {a}) does not sum to 1")
        if (start < 0).any() or abs(start.sum() - 1.0) > ROW_SUM_TOLERANCE:
            raise ContractViolationError("start_distribution must sum to 1")
        for s in np.flatnonzero(terminal):
            if not np.all(transition[s, :, s] == 1.0):
                raise ContractViolationError(f"terminal state {s} must self-loop")

        flags = {}
        for flag_name, mask in self.flags.items():
            frozen_mask = _frozen(mask, np.bool_)
            if frozen_mask.shape != (num_states,):
                raise ContractViolationError(f"flag '{flag_name}' needs one entry per state")
            flags[flag_name] = frozen_mask

        object.__setattr__(self, "transition", transition)
        object.__setattr__(self, "goal_map", goal_map)
        object.__setattr__(self, "start_distribution", start)
        object.__setattr__(self, "terminal", terminal)
        object.__setattr__(self, "policy_goals", policy_goals)
        object.__setattr__(self, "flags", flags)
        object.__setattr__(self, "state_labels", tuple(self.state_labels))

    @property
    def num_states(self) -> int:
        return int(self.transition.shape[0])

    @property
    def num_actions(self) -> int:
        return int(self.transition.shape[1])

    def check_state(self, s: int) -> None:
        if not 0 <= s < self.num_states:
            raise ContractViolationError(f"state {s} out of range [0, {self.num_states})")

    def check_action(self, a: int) -> None:
        if not 0 <= a < self.num_actions:
            raise ContractViolationError(f"action {a} out of range [0, {self.num_actions})")

    def check_goal(self, g: int) -> None:
        if not 0 <= g < self.num_goals:
            raise ContractViolationError(f"goal {g} out of range [0, {self.num_goals})")

    def transition_distribution(self, s: int, a: int) -> np.ndarray:
        """Exact next-state law ``P(. | s, a)`` as a read-only view."""
        self.check_state(s)
        self.check_action(a)
        return self.transition[s, a]

    def sample_step(self, s: int, a: int, rng: Rng) -> int:
        """Draw ``s'`` from ``P(. | s, a)``."""
        return rng.categorical(self.transition_distribution(s, a))

    def reward(self, s_next: int, g: int) -> float:
        """Sparse goal reward ``1{phi(s') = g}``."""
        self.check_state(s_next)
        self.check_goal(g)
        return 1.0 if self.goal_map[s_next] == g else 0.0

    def is_absorbing(self, s: int, g_p: int) -> bool:
        """Whether an episode pursuing ``g_p`` ends on arrival in ``s``."""
        return bool(self.terminal[s] or self.goal_map[s] == g_p)

    def absorbing_mask(self, g_p: int) -> np.ndarray:
        """``(S,)`` mask of states that end an episode pursuing ``g_p``."""
        return self.terminal | (self.goal_map == g_p)

    def sample_start(self, rng: Rng) -> int:
        return rng.categorical(self.start_distribution)

    def sample_policy_goal(self, rng: Rng) -> int:
        """Draw ``g_p`` uniformly from the policy goals.

        The goal of the start state stays eligible: rewards are paid on arrival,
        so pursuing it means leaving and coming back.
        """
        return int(self.policy_goals[rng.integers(self.policy_goals.size)])

    def sample_exploring_start(self, rng: Rng) -> int:
        """Draw a start uniformly over the non-terminal states."""
        candidates = np.flatnonzero(~self.terminal)
        return int(candidates[rng.integers(candidates.size)])

    def describe_state(self, s: int) -> str:
        if self.state_labels:
            return self.state_labels[s]
        return str(s)
