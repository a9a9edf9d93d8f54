"""Two-goal action-value table ``Q(s, a, g_r, g_p)``."""

from typing import Optional

import numpy as np

from ..core.rollout import PolicyTable
from ..exceptions import ContractViolationError

QKey = tuple[int, ...]


class QTable:
    """Sparse action-value table.

    Each key ``(s, g_r, g_p)`` (plus ``T`` when time-conditioned) holds the
    vector of values over actions; unseen keys read as zeros. Diagonal rows
    (``g_r == g_p``) are indexed separately because they define the policy.
    """

    def __init__(self, num_actions: int, t_conditioned: bool = False) -> None:
        if num_actions < 1:
            raise ContractViolationError("num_actions must be positive")
        self.num_actions = num_actions
        self.t_conditioned = t_conditioned
        self._rows: dict[QKey, np.ndarray] = {}
        self._diagonal: dict[QKey, np.ndarray] = {}
        self._zeros = np.zeros(num_actions)
        self._zeros.setflags(write=False)

    def __len__(self) -> int:
        return len(self._rows)

    def _key(self, s: int, g_r: int, g_p: int, t_remaining: Optional[int]) -> QKey:
        if self.t_conditioned:
            if t_remaining is None:
                raise ContractViolationError("time-conditioned table needs T")
            return (s, g_r, g_p, t_remaining)
        return (s, g_r, g_p)

    def values(self, s: int, g_r: int, g_p: int, t_remaining: Optional[int] = None) -> np.ndarray:
        """Action values at ``(s, g_r, g_p[, T])``; callers must not mutate them."""
        return self._rows.get(self._key(s, g_r, g_p, t_remaining), self._zeros)

    def value(
        self, s: int, a: int, g_r: int, g_p: int, t_remaining: Optional[int] = None
    ) -> float:
        return float(self.values(s, g_r, g_p, t_remaining)[a])

    def set_value(
        self, s: int, a: int, g_r: int, g_p: int, value: float, t_remaining: Optional[int] = None
    ) -> None:
        self._row_for_update(s, g_r, g_p, t_remaining)[a] = value

    def td_step(
        self,
        s: int,
        a: int,
        g_r: int,
        g_p: int,
        target: float,
        step: float,
        t_remaining: Optional[int] = None,
    ) -> None:
        """``Q += step * (target - Q)`` at one entry."""
        row = self._row_for_update(s, g_r, g_p, t_remaining)
        row[a] += step * (target - row[a])

    def _row_for_update(
        self, s: int, g_r: int, g_p: int, t_remaining: Optional[int]
    ) -> np.ndarray:
        key = self._key(s, g_r, g_p, t_remaining)
        row = self._rows.get(key)
        if row is None:
            row = np.zeros(self.num_actions)
            self._rows[key] = row
            if g_r == g_p:
                self._diagonal[key] = row
        return row

    def policy_table(self, num_states: int, num_goals: int, horizon: int) -> PolicyTable:
        """Greedy policy over diagonal rows; ties and unseen rows pick action 0."""
        if self.t_conditioned:
            actions = np.zeros((horizon + 1, num_states, num_goals), dtype=np.int64)
            for (s, g, _, t_remaining), row in self._diagonal.items():
                if t_remaining <= horizon:
                    actions[t_remaining, s, g] = int(np.argmax(row))
        else:
            actions = np.zeros((num_states, num_goals), dtype=np.int64)
            for (s, g, _), row in self._diagonal.items():
                actions[s, g] = int(np.argmax(row))
        return PolicyTable(actions)

    def start_values(self, num_states: int, num_goals: int, horizon: int) -> np.ndarray:
        """``V(s, g) = max_a Q(s, a, g, g)`` with ``T = horizon`` when time-conditioned."""
        values = np.zeros((num_states, num_goals))
        for key, row in self._diagonal.items():
            if self.t_conditioned and key[3] != horizon:
                continue
            values[key[0], key[1]] = row.max()
        return values
