"""Trajectory replay with hindsight relabeling.

Trajectories are stored whole so that hindsight goals can be drawn from the
future of any transition. An episode that ends early (terminal state, or the
pursued goal reached) is treated as padded with its final state up to the
horizon, so ``t_remaining`` always counts down to 1 at the horizon.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from ..core.rng import Rng
from ..exceptions import ContractViolationError, EmptyBufferError


class GoalSource(str, Enum):
    """Branch that produced a reward goal."""

    KEPT_POLICY_GOAL = "kept_policy_goal"
    HINDSIGHT_FUTURE = "hindsight_future"
    UNIFORM_SPACE = "uniform_space"


class Transition(NamedTuple):
    """One replayed step.

    Attributes:
        s: State before the action
        a: Action taken
        s_next: State reached
        g_p: Goal pursued during the episode
        t_remaining: Steps left including this one (``T``)
        episode_id: Episode the step belongs to
        step_index: Position within the episode
        achieved_goal: ``phi(s_next)``
        terminal: Whether ``s_next`` is a terminal state
    """

    s: int
    a: int
    s_next: int
    g_p: int
    t_remaining: int
    episode_id: int
    step_index: int
    achieved_goal: int
    terminal: bool = False

    def ends_episode_for(self, goal: int) -> bool:
        """Whether no reward for ``goal`` can follow ``s_next``."""
        return self.terminal or self.achieved_goal == goal

    @property
    def done(self) -> bool:
        """Whether the episode pursuing ``g_p`` ended on this step."""
        return self.ends_episode_for(self.g_p)


class GoalSample(NamedTuple):
    """A reward goal together with the branch that drew it."""

    g_r: int
    source: GoalSource


class BatchItem(NamedTuple):
    """A transition with its hindsight-mixture goal and its uniform goal."""

    transition: Transition
    goal: GoalSample
    alt_goal: GoalSample


@dataclass
class Trajectory:
    """Transitions of one episode, all sharing the pursued goal ``g_p``."""

    g_p: int
    episode_id: int = 0
    transitions: list[Transition] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.transitions)

    def append(self, transition: Transition) -> None:
        self.transitions.append(transition)

    def achieved_goals(self) -> np.ndarray:
        return np.array([t.achieved_goal for t in self.transitions], dtype=np.int64)

    def validate(self) -> None:
        """Check the replay invariants.

        Raises:
            ContractViolationError: On an empty trajectory, a changing ``g_p``,
                non-consecutive steps or a ``t_remaining`` that does not count down
        """
        if not self.transitions:
            raise ContractViolationError("cannot record an empty trajectory")
        first = self.transitions[0]
        for offset, transition in enumerate(self.transitions):
            if transition.g_p != self.g_p:
                raise ContractViolationError("g_p must stay fixed within a trajectory")
            if transition.step_index != first.step_index + offset:
                raise ContractViolationError("step indices must be consecutive")
            if transition.t_remaining != first.t_remaining - offset:
                raise ContractViolationError("t_remaining must count down by one per step")
        if self.transitions[-1].t_remaining < 1:
            raise ContractViolationError("t_remaining must stay positive")


class ReplayBuffer:
    """FIFO store of whole trajectories with uniform transition sampling."""

    def __init__(self, capacity: Optional[int] = None) -> None:
        """Initialize the buffer.

        Args:
            capacity: Maximum number of stored episodes; ``None`` keeps everything
        """
        if capacity is not None and capacity < 1:
            raise ContractViolationError("capacity must be positive")
        self.capacity = capacity
        self._trajectories: deque[Trajectory] = deque()
        self._num_transitions = 0
        self._cumulative: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return self._num_transitions

    @property
    def num_episodes(self) -> int:
        return len(self._trajectories)

    @property
    def trajectories(self) -> tuple[Trajectory, ...]:
        return tuple(self._trajectories)

    def record_trajectory(self, trajectory: Trajectory) -> None:
        """Store a trajectory, evicting the oldest when over capacity."""
        trajectory.validate()
        self._trajectories.append(trajectory)
        self._num_transitions += len(trajectory)
        while self.capacity is not None and len(self._trajectories) > self.capacity:
            evicted = self._trajectories.popleft()
            self._num_transitions -= len(evicted)
        self._cumulative = None

    def sample_position(self, rng: Rng) -> tuple[Trajectory, int]:
        """Pick a stored transition uniformly; returns its trajectory and step offset."""
        if self._num_transitions == 0:
            raise EmptyBufferError("cannot sample from an empty replay buffer")
        if self._cumulative is None:
            self._cumulative = np.cumsum([len(t) for t in self._trajectories])
        flat = rng.integers(self._num_transitions)
        which = int(np.searchsorted(self._cumulative, flat, side="right"))
        offset = flat - (int(self._cumulative[which - 1]) if which else 0)
        return self._trajectories[which], offset


def relabel_her(trajectory: Trajectory, step_index: int, k: int, rng: Rng) -> GoalSample:
    """Draw a HER reward goal for one transition.

    With probability ``1 / (k + 1)`` the pursued goal is kept. Otherwise the
    goal achieved at a uniformly chosen step among the ``T`` next states (the
    first being ``s_next`` itself, padding past the end) is returned.

    Args:
        trajectory: Trajectory holding the transition
        step_index: Offset of the transition within ``trajectory``
        k: Hindsight goals per kept goal
        rng: Random stream

    Returns:
        The GoalSample
    """
    if not 0 <= step_index < len(trajectory):
        raise ContractViolationError(f"step {step_index} outside trajectory of {len(trajectory)}")
    if k < 1:
        raise ContractViolationError("k must be positive")
    transition = trajectory.transitions[step_index]
    if rng.random() < 1.0 / (k + 1):
        return GoalSample(transition.g_p, GoalSource.KEPT_POLICY_GOAL)
    future = step_index + rng.integers(transition.t_remaining)
    future = min(future, len(trajectory) - 1)
    return GoalSample(trajectory.transitions[future].achieved_goal, GoalSource.HINDSIGHT_FUTURE)


def sample_uniform_goal(num_goals: int, rng: Rng) -> GoalSample:
    """Draw a goal uniformly from the whole goal space."""
    if num_goals < 1:
        raise ContractViolationError("num_goals must be positive")
    return GoalSample(rng.integers(num_goals), GoalSource.UNIFORM_SPACE)


def sample_batch(
    buffer: ReplayBuffer, batch_size: int, k: int, num_goals: int, rng: Rng
) -> list[BatchItem]:
    """Sample transitions with a HER goal and an independent uniform goal each.

    Raises:
        EmptyBufferError: If the buffer holds no transitions
    """
    batch = []
    for _ in range(batch_size):
        trajectory, offset = buffer.sample_position(rng)
        goal = relabel_her(trajectory, offset, k, rng)
        alt_goal = sample_uniform_goal(num_goals, rng)
        batch.append(BatchItem(trajectory.transitions[offset], goal, alt_goal))
    return batch
