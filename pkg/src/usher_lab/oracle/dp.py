"""Exact dynamic-programming references.

``value_iteration`` solves the finite-horizon goal-reaching problem for every
goal at once; ``exact_successor_density`` runs the successor-goal recursion
backwards in ``T`` for a fixed policy. Both work on the full transition tensor
and are exact up to floating point.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..core.mdp import MultiGoalMdp
from ..core.rollout import PolicyTable
from ..exceptions import ContractViolationError, FileOperationError


@dataclass(frozen=True, eq=False)
class ExactQ:
    """Optimal finite-horizon action values.

    Attributes:
        values: ``(H + 1, len(goals), S, A)``; ``values[T]`` has ``T`` steps left
        goals: Goal ids covered, in axis order
        horizon: ``H``
        gamma: Discount used
        sweep_deltas: ``max |V_T - V_{T-1}|`` for ``T = 1..H``
    """

    values: np.ndarray
    goals: np.ndarray
    horizon: int
    gamma: float
    sweep_deltas: np.ndarray

    def goal_axis(self, g: int) -> int:
        hits = np.flatnonzero(self.goals == g)
        if hits.size == 0:
            raise ContractViolationError(f"goal {g} was not solved")
        return int(hits[0])

    def q(self, s: int, a: int, g: int, t_remaining: Optional[int] = None) -> float:
        """``Q*(s, a, g)`` with ``T`` steps left (the horizon by default)."""
        t = self.horizon if t_remaining is None else t_remaining
        return float(self.values[t, self.goal_axis(g), s, a])

    def state_value(self, s: int, g: int, t_remaining: Optional[int] = None) -> float:
        t = self.horizon if t_remaining is None else t_remaining
        return float(self.values[t, self.goal_axis(g), s].max())

    def start_values(self, num_goals: int) -> np.ndarray:
        """``(S, G)`` optimal values at the horizon; unsolved goals read 0."""
        out = np.zeros((self.values.shape[2], num_goals))
        out[:, self.goals] = self.values[self.horizon].max(axis=2).T
        return out

    def dump(self, path: Path) -> None:
        """Write ``Q*`` at the full horizon to an ``.npz`` file.

        The archive holds ``q`` (``|goals| x S x A``), ``goals``, ``horizon`` and
        ``gamma``.
        """
        _save_npz(
            path,
            q=self.values[self.horizon],
            goals=self.goals,
            horizon=np.int64(self.horizon),
            gamma=np.float64(self.gamma),
        )

    def policy_table(self, num_goals: int) -> PolicyTable:
        """Time-dependent greedy policy; unsolved goals and ``T = 0`` take action 0."""
        steps, _, num_states, _ = self.values.shape
        actions = np.zeros((steps, num_states, num_goals), dtype=np.int64)
        greedy = self.values.argmax(axis=3)
        actions[1:, :, self.goals] = greedy[1:].transpose(0, 2, 1)
        return PolicyTable(actions)


@dataclass(frozen=True, eq=False)
class ExactF:
    """Exact successor-goal densities for one pursued goal and policy.

    Attributes:
        densities: ``(T_max + 1, S, A, G)``; ``densities[T]`` is ``f(. | s, a, g_p, T)``
        successors: ``(T_max + 1, S, G)``; ``successors[T][s']`` is ``h(. | s', T)``
        g_p: Pursued goal
    """

    densities: np.ndarray
    successors: np.ndarray
    g_p: int

    @property
    def t_max(self) -> int:
        return self.densities.shape[0] - 1

    def row(self, s: int, a: int, t_remaining: int) -> np.ndarray:
        if not 1 <= t_remaining <= self.t_max:
            raise ContractViolationError(f"T must lie in [1, {self.t_max}]")
        return self.densities[t_remaining, s, a]

    def normalization_error(self) -> float:
        return float(np.abs(self.densities[1:].sum(axis=3) - 1.0).max())

    def dump(self, path: Path) -> None:
        """Write ``densities``, ``successors`` and ``g_p`` to an ``.npz`` file."""
        _save_npz(
            path,
            densities=self.densities,
            successors=self.successors,
            g_p=np.int64(self.g_p),
        )


def _save_npz(path: Path, **arrays: np.ndarray) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(path, **arrays)
    except OSError as e:
        raise FileOperationError(f"Cannot write oracle table: {e.strerror}", path) from e


def _goal_backup(
    mdp: MultiGoalMdp, goals: np.ndarray, gamma: float, v_prev: np.ndarray
) -> np.ndarray:
    reward = (mdp.goal_map[None, :] == goals[:, None]).astype(np.float64)
    absorbing = reward.astype(bool) | mdp.terminal[None, :]
    continuation = reward + gamma * np.where(absorbing, 0.0, v_prev)
    return np.einsum("sap,gp->gsa", mdp.transition, continuation)


def value_iteration(
    mdp: MultiGoalMdp, goal: Optional[int] = None, gamma: Optional[float] = None
) -> ExactQ:
    """Backward finite-horizon DP with absorbing success.

    Args:
        mdp: Environment
        goal: Single goal to solve; every goal when ``None``
        gamma: Discount; the MDP's own when ``None``

    Returns:
        ExactQ covering ``T = 0..horizon``
    """
    gamma = mdp.discount if gamma is None else gamma
    goals = np.arange(mdp.num_goals) if goal is None else np.array([goal])
    if goal is not None:
        mdp.check_goal(goal)

    values = np.zeros((mdp.horizon + 1, goals.size, mdp.num_states, mdp.num_actions))
    deltas = np.zeros(mdp.horizon)
    v_prev = np.zeros((goals.size, mdp.num_states))
    for t in range(1, mdp.horizon + 1):
        values[t] = _goal_backup(mdp, goals, gamma, v_prev)
        v_next = values[t].max(axis=2)
        deltas[t - 1] = np.abs(v_next - v_prev).max()
        v_prev = v_next
    return ExactQ(
        values=values, goals=goals, horizon=mdp.horizon, gamma=gamma, sweep_deltas=deltas
    )


def bellman_residual(mdp: MultiGoalMdp, exact: ExactQ) -> float:
    """Largest violation of the optimality equation over all ``T``."""
    residual = 0.0
    for t in range(1, exact.horizon + 1):
        v_prev = exact.values[t - 1].max(axis=2)
        backup = _goal_backup(mdp, exact.goals, exact.gamma, v_prev)
        residual = max(residual, float(np.abs(backup - exact.values[t]).max()))
    return residual


def exact_successor_density(
    mdp: MultiGoalMdp, policy: PolicyTable, g_p: int, t_max: Optional[int] = None
) -> ExactF:
    """Successor-goal densities by backward induction on ``T``.

    Args:
        mdp: Environment
        policy: Deterministic policy followed after the first action
        g_p: Pursued goal (its states absorb, like terminal ones)
        t_max: Largest ``T``; the horizon by default

    Returns:
        ExactF with rows for ``T = 1..t_max``
    """
    mdp.check_goal(g_p)
    t_max = mdp.horizon if t_max is None else t_max
    if t_max < 1:
        raise ContractViolationError("t_max must be positive")

    num_states = mdp.num_states
    onehot = np.eye(mdp.num_goals)[mdp.goal_map]
    absorbing = mdp.absorbing_mask(g_p)
    densities = np.zeros((t_max + 1, num_states, mdp.num_actions, mdp.num_goals))
    successors = np.zeros((t_max + 1, num_states, mdp.num_goals))
    for t in range(1, t_max + 1):
        if t == 1:
            h = onehot.copy()
        else:
            follow = policy.stationary_slice(t - 1)[:, g_p]
            continuation = densities[t - 1, np.arange(num_states), follow]
            h = onehot / t + (1.0 - 1.0 / t) * continuation
            h[absorbing] = onehot[absorbing]
        successors[t] = h
        densities[t] = np.einsum("sap,pg->sag", mdp.transition, h)
    return ExactF(densities=densities, successors=successors, g_p=g_p)


def recursion_residual(mdp: MultiGoalMdp, policy: PolicyTable, exact: ExactF) -> float:
    """Largest L1 gap between stored rows and one application of the recursion."""
    onehot = np.eye(mdp.num_goals)[mdp.goal_map]
    absorbing = mdp.absorbing_mask(exact.g_p)
    states = np.arange(mdp.num_states)
    residual = 0.0
    for t in range(1, exact.t_max + 1):
        if t == 1:
            h = onehot
        else:
            follow = policy.stationary_slice(t - 1)[:, exact.g_p]
            h = onehot / t + (1.0 - 1.0 / t) * exact.densities[t - 1, states, follow]
            h = np.where(absorbing[:, None], onehot, h)
        expected = np.einsum("sap,pg->sag", mdp.transition, h)
        residual = max(residual, float(np.abs(expected - exact.densities[t]).sum(axis=2).max()))
    return residual
