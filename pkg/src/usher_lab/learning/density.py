"""Tabular successor-goal density ``f(g_r | s, a, g_p, T)``.

Each row is the distribution of the goal HER's "future" sampler would pick for
a transition from ``(s, a)`` with ``T`` steps remaining while pursuing ``g_p``.
Rows satisfy the recursion

    f(. | s, a, g_p, T) = E_{s'} h(. | s', T)
    h(. | s', T) = (1/T) onehot(phi(s')) + (1 - 1/T) f(. | s', pi(s', g_p), g_p, T - 1)

with ``h = onehot(phi(s'))`` once ``s'`` ends the episode (padding).
"""

from collections.abc import Callable, Iterator
from pathlib import Path
from typing import Optional

import numpy as np

from ..constants import DENSITY_ROW_TOLERANCE
from ..exceptions import ContractViolationError, FileOperationError
from .replay import GoalSample, GoalSource, Transition
from .weights import importance_weight

# pi(s, g_p, T) -> action
Policy = Callable[[int, int, int], int]
DensityKey = tuple[int, int, int, int]


class FTable:
    """Sparse table of goal densities keyed by ``(s, a, g_p, T)``.

    Unseen keys read as the uniform row ``1 / |G|``. An optional target copy
    serves the bootstrap and weight lookups between snapshots.
    """

    def __init__(self, num_goals: int, use_target: bool = False) -> None:
        """Initialize an empty table.

        Args:
            num_goals: Size of the goal space
            use_target: Keep a separate snapshot for bootstrap lookups
        """
        if num_goals < 1:
            raise ContractViolationError("num_goals must be positive")
        self.num_goals = num_goals
        self.use_target = use_target
        self._rows: dict[DensityKey, np.ndarray] = {}
        self._target: dict[DensityKey, np.ndarray] = {}
        self._uniform = np.full(num_goals, 1.0 / num_goals)
        self._uniform.setflags(write=False)

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, key: DensityKey) -> bool:
        return key in self._rows

    def keys(self) -> Iterator[DensityKey]:
        return iter(self._rows)

    @staticmethod
    def _check_t(t_remaining: int) -> None:
        if t_remaining < 1:
            raise ContractViolationError("density needs T >= 1 (no future states at T = 0)")

    def row(self, s: int, a: int, g_p: int, t_remaining: int, target: bool = False) -> np.ndarray:
        """Density row; callers must not mutate it.

        Args:
            target: Read the snapshot instead of the live table (when enabled)
        """
        self._check_t(t_remaining)
        source = self._target if target and self.use_target else self._rows
        return source.get((s, a, g_p, t_remaining), self._uniform)

    def query(self, s: int, a: int, g_p: int, t_remaining: int, g_r: int) -> float:
        """``f(g_r | s, a, g_p, T)``."""
        return float(self.row(s, a, g_p, t_remaining)[g_r])

    def set_row(self, key: DensityKey, values: np.ndarray) -> None:
        """Store a row after checking it is a probability vector."""
        self._check_t(key[3])
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.num_goals,) or (values < 0).any():
            raise ContractViolationError(
                "density rows must be non-negative with one entry per goal"
            )
        if abs(values.sum() - 1.0) > DENSITY_ROW_TOLERANCE:
            raise ContractViolationError("density rows must sum to 1")
        self._rows[key] = values

    def snapshot_target(self) -> None:
        """Replace the target copy with the live contents."""
        self._target = {key: row.copy() for key, row in self._rows.items()}

    def bootstrap_row(self, transition: Transition, policy: Policy) -> np.ndarray:
        """Row reached after ``s_next``: ``f(. | s', pi(s', g_p), g_p, T - 1)``.

        Once the episode is over (or ``T = 1``) the padded future is
        ``phi(s')`` forever, so the point mass is returned instead.
        """
        t_remaining = transition.t_remaining
        self._check_t(t_remaining)
        if transition.done or t_remaining == 1:
            point = np.zeros(self.num_goals)
            point[transition.achieved_goal] = 1.0
            return point
        action = policy(transition.s_next, transition.g_p, t_remaining - 1)
        return self.row(transition.s_next, action, transition.g_p, t_remaining - 1, target=True)

    def successor_row(self, transition: Transition, policy: Policy) -> np.ndarray:
        """``h(. | s', T)``: density of the hindsight goal given the realised ``s'``."""
        t_remaining = transition.t_remaining
        h = (1.0 - 1.0 / t_remaining) * self.bootstrap_row(transition, policy)
        h[transition.achieved_goal] += 1.0 / t_remaining
        return h

    def dump(self, path: Path) -> None:
        """Write the live rows to an ``.npz`` file.

        The archive holds ``keys`` (n x 4 int64: s, a, g_p, T), ``rows``
        (n x |G| float64) and ``num_goals``.
        """
        keys = np.array(sorted(self._rows), dtype=np.int64).reshape(-1, 4)
        rows = np.array([self._rows[tuple(k)] for k in keys.tolist()]).reshape(-1, self.num_goals)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            np.savez(path, keys=keys, rows=rows, num_goals=np.int64(self.num_goals))
        except OSError as e:
            raise FileOperationError(f"Cannot write density table: {e.strerror}", path) from e

    @classmethod
    def load(cls, path: Path, use_target: bool = False) -> "FTable":
        """Read a table written by ``dump``."""
        try:
            with np.load(path) as archive:
                table = cls(int(archive["num_goals"]), use_target=use_target)
                for key, values in zip(archive["keys"].tolist(), archive["rows"]):
                    table.set_row(tuple(key), values)
        except (OSError, KeyError) as e:
            raise FileOperationError(f"Cannot read density table: {e}", path) from e
        if use_target:
            table.snapshot_target()
        return table


def _check_lr(lr: float, allow_zero: bool = False) -> None:
    lower_ok = lr >= 0.0 if allow_zero else lr > 0.0
    if not (lower_ok and lr <= 1.0):
        raise ContractViolationError(f"learning rate {lr} outside (0, 1]")


def f_update_dense(table: FTable, transition: Transition, policy: Policy, lr: float) -> None:
    """Move the whole row towards its one-sample recursion target.

    ``row <- (1 - lr) row + lr h(. | s', T)``; convex, so rows stay normalised.
    """
    _check_lr(lr)
    key = (transition.s, transition.a, transition.g_p, transition.t_remaining)
    current = table.row(*key)
    table._rows[key] = (1.0 - lr) * current + lr * table.successor_row(transition, policy)


def f_update_sampled(
    table: FTable,
    transition: Transition,
    goal: GoalSample,
    alt_goal: GoalSample,
    policy: Policy,
    lr: float,
    alpha_f: float,
    k: int,
) -> None:
    """Stochastic update touching only the sampled goals and ``phi(s')``.

    The hindsight goal is weighted by ``(1 - alpha_f) W / (rate * f)`` and the
    uniform goal by ``alpha_f W' |G|``, where ``rate = k / (k + 1)`` is the
    hindsight branch probability, so that each entry's expected step equals the
    dense update. A kept policy goal carries no density information and is
    skipped. Every step adds ``lr / T`` at ``phi(s')``; the row is then clamped
    at zero and renormalised.

    Args:
        table: Density table to update
        transition: Replayed transition
        goal: Goal from ``relabel_her``
        alt_goal: Goal from ``sample_uniform_goal``
        policy: ``pi(s, g_p, T)`` used for the bootstrap row
        lr: Learning rate in ``[0, 1]``; zero leaves the table unchanged
        alpha_f: Uniform-goal mixture fraction
        k: Hindsight goals per kept goal
    """
    _check_lr(lr, allow_zero=True)
    if not 0.0 < alpha_f <= 1.0:
        raise ContractViolationError("alpha_f must lie in (0, 1]")
    if lr == 0.0:
        return

    t_remaining = transition.t_remaining
    key = (transition.s, transition.a, transition.g_p, t_remaining)
    live = table.row(*key).copy()
    f_here = table.row(*key, target=True)
    bootstrap = table.bootstrap_row(transition, policy)
    h = table.successor_row(transition, policy)
    keep = 1.0 - 1.0 / t_remaining
    hindsight_rate = k / (k + 1.0)

    delta = np.zeros_like(live)
    if goal.source is GoalSource.HINDSIGHT_FUTURE:
        g = goal.g_r
        mixture = alpha_f * f_here[g] + (1.0 - alpha_f) * h[g]
        if mixture > 0.0:
            step = min(lr * (1.0 - alpha_f) / (hindsight_rate * mixture), 1.0)
            delta[g] += step * (keep * bootstrap[g] - live[g])
    g_alt = alt_goal.g_r
    w_alt = importance_weight(float(f_here[g_alt]), float(h[g_alt]), alpha_f)
    step_alt = min(lr * alpha_f * w_alt * table.num_goals, 1.0)
    delta[g_alt] += step_alt * (keep * bootstrap[g_alt] - live[g_alt])

    updated = live + delta
    updated[transition.achieved_goal] += lr / t_remaining
    np.clip(updated, 0.0, None, out=updated)
    total = updated.sum()
    table._rows[key] = updated / total if total > 0.0 else table.row(*key).copy()
