"""Vectorised greedy rollouts.

Policies are stored as integer tables so that thousands of episodes can be
advanced in lock-step with numpy. Finished episodes are padded with their
final absorbing state, which is also how replay treats early termination.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mdp import MultiGoalMdp
from .rng import Rng


@dataclass(frozen=True, eq=False)
class PolicyTable:
    """Deterministic goal-conditioned policy ``pi(s, g_p[, T])``.

    ``actions`` has shape ``(S, G)`` for stationary policies or
    ``(H + 1, S, G)`` when the action depends on the steps remaining ``T``.
    """

    actions: np.ndarray

    @classmethod
    def constant(cls, num_states: int, num_goals: int, action: int) -> "PolicyTable":
        return cls(np.full((num_states, num_goals), action, dtype=np.int64))

    @property
    def time_dependent(self) -> bool:
        return self.actions.ndim == 3

    def act(self, s: np.ndarray, g_p: np.ndarray, t_remaining: np.ndarray) -> np.ndarray:
        """Vectorised lookup."""
        if self.time_dependent:
            return self.actions[t_remaining, s, g_p]
        return self.actions[s, g_p]

    def __call__(self, s: int, g_p: int, t_remaining: int) -> int:
        if self.time_dependent:
            return int(self.actions[t_remaining, s, g_p])
        return int(self.actions[s, g_p])

    def stationary_slice(self, t_remaining: int) -> np.ndarray:
        """``(S, G)`` action table used with ``t_remaining`` steps left."""
        if self.time_dependent:
            return self.actions[t_remaining]
        return self.actions


@dataclass(frozen=True, eq=False)
class RolloutBatch:
    """Outcome of ``n`` lock-step episodes.

    Attributes:
        states: ``(n, H + 1)`` visited states, padded after absorption
        actions: ``(n, H)`` actions taken, ``-1`` once absorbed
        goals: ``(n,)`` pursued goal per episode
        lengths: ``(n,)`` number of real transitions
        returns: ``(n,)`` discounted return
        successes: ``(n,)`` whether ``g_p`` was achieved
    """

    states: np.ndarray
    actions: np.ndarray
    goals: np.ndarray
    lengths: np.ndarray
    returns: np.ndarray
    successes: np.ndarray

    @property
    def starts(self) -> np.ndarray:
        return self.states[:, 0]

    def visited(self, mask: np.ndarray) -> np.ndarray:
        """Per episode, whether any entered state lies in ``mask``."""
        return mask[self.states[:, 1:]].any(axis=1)


def sample_starts_and_goals(
    mdp: MultiGoalMdp, n: int, rng: Rng
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` start states and, independently, uniform policy goals."""
    starts = rng.categorical_rows(np.broadcast_to(mdp.start_distribution, (n, mdp.num_states)))
    policy_goals = mdp.policy_goals
    draws = np.minimum(
        np.floor(rng.random(n) * policy_goals.size).astype(np.int64), policy_goals.size - 1
    )
    return starts, policy_goals[draws]


def rollout(
    mdp: MultiGoalMdp,
    policy: PolicyTable,
    n: int,
    rng: Rng,
    starts: Optional[np.ndarray] = None,
    goals: Optional[np.ndarray] = None,
) -> RolloutBatch:
    """Run ``n`` greedy episodes of ``mdp.horizon`` steps.

    Args:
        mdp: Environment
        policy: Action table
        n: Number of episodes
        rng: Random stream
        starts: Optional fixed start states
        goals: Optional fixed policy goals

    Returns:
        RolloutBatch with padded state sequences
    """
    if starts is None or goals is None:
        sampled_starts, sampled_goals = sample_starts_and_goals(mdp, n, rng)
        starts = sampled_starts if starts is None else np.asarray(starts, dtype=np.int64)
        goals = sampled_goals if goals is None else np.asarray(goals, dtype=np.int64)

    horizon = mdp.horizon
    states = np.empty((n, horizon + 1), dtype=np.int64)
    actions = np.full((n, horizon), -1, dtype=np.int64)
    returns = np.zeros(n)
    successes = np.zeros(n, dtype=bool)
    lengths = np.zeros(n, dtype=np.int64)
    absorbed = np.zeros(n, dtype=bool)

    current = np.asarray(starts, dtype=np.int64).copy()
    states[:, 0] = current
    discount = 1.0
    for step in range(horizon):
        active = ~absorbed
        chosen = policy.act(current, goals, np.full(n, horizon - step))
        nxt = current.copy()
        if active.any():
            rows = mdp.transition[current[active], chosen[active]]
            nxt[active] = rng.categorical_rows(rows)
            actions[active, step] = chosen[active]
            lengths[active] += 1

        hit = active & (mdp.goal_map[nxt] == goals)
        returns += discount * hit
        successes |= hit
        absorbed |= active & (mdp.terminal[nxt] | hit)
        discount *= mdp.discount
        current = nxt
        states[:, step + 1] = current

    return RolloutBatch(
        states=states,
        actions=actions,
        goals=np.asarray(goals, dtype=np.int64),
        lengths=lengths,
        returns=returns,
        successes=successes,
    )
