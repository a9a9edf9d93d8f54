"""Tabular learners: goal-conditioned Q-learning, HER and USHER.

All three share the same behaviour policy (epsilon-greedy on the diagonal of
the Q table) and differ in how replayed experience is turned into updates.
"""

from abc import ABC, abstractmethod
from typing import ClassVar, Optional

import numpy as np

from ..core.mdp import MultiGoalMdp
from ..core.rng import Rng
from ..core.rollout import PolicyTable
from ..exceptions import ContractViolationError
from ..types import AgentKind, FUpdateMode, LearnerConfig
from ..utils.logger import get_logger
from .density import FTable, Policy, f_update_dense, f_update_sampled
from .qtable import QTable
from .replay import (
    BatchItem,
    GoalSample,
    GoalSource,
    ReplayBuffer,
    Trajectory,
    Transition,
    sample_batch,
)
from .weights import clip_ratio, importance_weight


def learning_rate(config: LearnerConfig, episode: int) -> float:
    """``lr0 (1 + n) ** -decay`` for global episode count ``n``."""
    return config.lr0 * (1.0 + episode) ** (-config.lr_decay)


def greedy_action(
    q: QTable, s: int, g_p: int, t_remaining: Optional[int] = None
) -> int:
    """``argmax_a Q(s, a, g_p, g_p)``, lowest index on ties."""
    return int(np.argmax(q.values(s, g_p, g_p, t_remaining)))


def behavior_action(
    q: QTable,
    s: int,
    g_p: int,
    epsilon: float,
    rng: Rng,
    t_remaining: Optional[int] = None,
) -> int:
    """Epsilon-greedy action."""
    if not 0.0 <= epsilon <= 1.0:
        raise ContractViolationError("epsilon must lie in [0, 1]")
    if epsilon > 0.0 and rng.random() < epsilon:
        return rng.integers(q.num_actions)
    return greedy_action(q, s, g_p, t_remaining)


def greedy_policy(q: QTable) -> Policy:
    """Callable ``pi(s, g_p, T)`` reading the live table."""
    if q.t_conditioned:
        return lambda s, g_p, t_remaining: greedy_action(q, s, g_p, t_remaining)
    return lambda s, g_p, t_remaining: greedy_action(q, s, g_p)


def _bootstrap_t(q: QTable, t_remaining: int) -> Optional[int]:
    return t_remaining - 1 if q.t_conditioned else None


def _check_transition(transition: Transition) -> None:
    if transition.t_remaining < 1:
        raise ContractViolationError("replayed transitions need T >= 1")


def _single_goal_update(
    q: QTable, transition: Transition, goal: int, lr: float, gamma: float
) -> None:
    _check_transition(transition)
    reward = 1.0 if transition.achieved_goal == goal else 0.0
    done = transition.ends_episode_for(goal)
    t_next = _bootstrap_t(q, transition.t_remaining)
    if done or t_next == 0:
        target = reward
    else:
        target = reward + gamma * float(q.values(transition.s_next, goal, goal, t_next).max())
    q.td_step(
        transition.s, transition.a, goal, goal, target, min(lr, 1.0), transition.t_remaining
    )


def q_update_vanilla(
    q: QTable, transition: Transition, goal: int, lr: float, gamma: float
) -> None:
    """Q-learning step on ``Q(s, a, g, g)`` for the pursued goal."""
    _single_goal_update(q, transition, goal, lr, gamma)


def her_update(
    q: QTable, transition: Transition, goal: GoalSample, lr: float, gamma: float
) -> None:
    """Single-goal HER step on ``Q(s, a, g_r, g_r)`` for a relabeled goal."""
    _single_goal_update(q, transition, goal.g_r, lr, gamma)


def compute_w(
    f: FTable, transition: Transition, g_r: int, alpha: float, policy: Policy
) -> float:
    """Mixture importance weight for ``g_r`` on one transition.

    Uses ``f(g_r | s, a, g_p, T)`` and the density ``h(g_r | s', T)`` of the
    hindsight goal given the realised next state, both from the target table.
    """
    _check_transition(transition)
    f_here = f.row(
        transition.s, transition.a, transition.g_p, transition.t_remaining, target=True
    )[g_r]
    h_next = f.successor_row(transition, policy)[g_r]
    return importance_weight(float(f_here), float(h_next), alpha)


def usher_update(
    q: QTable,
    f: FTable,
    item: BatchItem,
    config: LearnerConfig,
    policy: Policy,
    lr: float,
) -> None:
    """Importance-weighted two-goal update for one replayed transition.

    The relabeled goal is weighted by ``(1 - alpha_Q) clip(W)`` and the uniform
    goal by ``alpha_Q clip(W')``. With ``goal_rate_correction`` the uniform term
    is also scaled by ``(k / (k + 1)) f(g_r' | s, a, g_p, T) |G|`` so both branches
    reach each table cell at the rate the mixture assumes. Kept policy goals
    carry weight 1. The density table is updated afterwards.
    """
    transition, goal, alt_goal = item
    _check_transition(transition)
    t_remaining = transition.t_remaining
    t_next = _bootstrap_t(q, t_remaining)
    num_goals = f.num_goals
    f_row = f.row(transition.s, transition.a, transition.g_p, t_remaining, target=True)
    h_row = f.successor_row(transition, policy)

    if not transition.done and t_next != 0:
        next_action = policy(transition.s_next, transition.g_p, max(t_remaining - 1, 1))
    else:
        next_action = None

    def td_target(g_r: int) -> float:
        reward = 1.0 if transition.achieved_goal == g_r else 0.0
        if next_action is None or reward == 1.0:
            return reward
        return reward + config.gamma * q.value(
            transition.s_next, next_action, g_r, transition.g_p, t_next
        )

    if goal.source is GoalSource.KEPT_POLICY_GOAL:
        w = 1.0
    else:
        w = importance_weight(float(f_row[goal.g_r]), float(h_row[goal.g_r]), config.alpha_q)
    weight = (1.0 - config.alpha_q) * clip_ratio(w, config.clip)

    w_alt = importance_weight(
        float(f_row[alt_goal.g_r]), float(h_row[alt_goal.g_r]), config.alpha_q
    )
    weight_alt = config.alpha_q * clip_ratio(w_alt, config.clip)
    if config.goal_rate_correction:
        weight_alt *= config.k / (config.k + 1.0) * float(f_row[alt_goal.g_r]) * num_goals

    # both targets are read before either entry moves
    target = td_target(goal.g_r)
    target_alt = td_target(alt_goal.g_r)
    q.td_step(
        transition.s,
        transition.a,
        goal.g_r,
        transition.g_p,
        target,
        min(lr * weight, 1.0),
        t_remaining,
    )
    if weight_alt > 0.0:
        q.td_step(
            transition.s,
            transition.a,
            alt_goal.g_r,
            transition.g_p,
            target_alt,
            min(lr * weight_alt, 1.0),
            t_remaining,
        )

    if config.f_update is FUpdateMode.DENSE:
        f_update_dense(f, transition, policy, min(lr, 1.0))
    else:
        f_update_sampled(
            f, transition, goal, alt_goal, policy, min(lr, 1.0), config.alpha_f, config.k
        )


class Learner(ABC):
    """Common behaviour of the tabular learners."""

    kind: ClassVar[AgentKind]

    def __init__(self, mdp: MultiGoalMdp, config: LearnerConfig) -> None:
        self.mdp = mdp
        self.config = config
        self.q = QTable(mdp.num_actions, t_conditioned=config.t_conditioned_q)
        self.logger = get_logger()

    def act(self, s: int, g_p: int, t_remaining: int, rng: Rng) -> int:
        t_key = t_remaining if self.q.t_conditioned else None
        return behavior_action(self.q, s, g_p, self.config.epsilon, rng, t_key)

    @abstractmethod
    def end_episode(self, trajectory: Trajectory, lr: float, rng: Rng, episode: int) -> None:
        """Hook called once per finished episode."""

    def policy_table(self) -> PolicyTable:
        return self.q.policy_table(self.mdp.num_states, self.mdp.num_goals, self.mdp.horizon)

    def start_values(self) -> np.ndarray:
        """Predicted ``V(s, g_p)`` used for the start-state bias."""
        return self.q.start_values(self.mdp.num_states, self.mdp.num_goals, self.mdp.horizon)


class QLearningLearner(Learner):
    """Goal-conditioned Q-learning on the pursued goal only.

    Transitions are replayed from a buffer with the same batch budget as the
    hindsight learners, but every update uses the goal the episode pursued.
    """

    kind = AgentKind.QLEARNING

    def __init__(self, mdp: MultiGoalMdp, config: LearnerConfig) -> None:
        super().__init__(mdp, config)
        self.buffer = ReplayBuffer(config.buffer_capacity)

    def end_episode(self, trajectory: Trajectory, lr: float, rng: Rng, episode: int) -> None:
        self.buffer.record_trajectory(trajectory)
        for _ in range(self.config.updates_per_episode * self.config.batch_size):
            replayed, offset = self.buffer.sample_position(rng)
            transition = replayed.transitions[offset]
            q_update_vanilla(self.q, transition, transition.g_p, lr, self.config.gamma)


class HerLearner(Learner):
    """Classic HER on the single-goal table ``Q(s, a, g, g)``."""

    kind = AgentKind.HER

    def __init__(self, mdp: MultiGoalMdp, config: LearnerConfig) -> None:
        super().__init__(mdp, config)
        self.buffer = ReplayBuffer(config.buffer_capacity)

    def end_episode(self, trajectory: Trajectory, lr: float, rng: Rng, episode: int) -> None:
        self.buffer.record_trajectory(trajectory)
        for _ in range(self.config.updates_per_episode):
            batch = sample_batch(
                self.buffer, self.config.batch_size, self.config.k, self.mdp.num_goals, rng
            )
            for item in batch:
                her_update(self.q, item.transition, item.goal, lr, self.config.gamma)


class UsherLearner(Learner):
    """Two-goal learner with importance-weighted hindsight correction."""

    kind = AgentKind.USHER

    def __init__(self, mdp: MultiGoalMdp, config: LearnerConfig) -> None:
        super().__init__(mdp, config)
        self.buffer = ReplayBuffer(config.buffer_capacity)
        self.f = FTable(mdp.num_goals, use_target=config.target_interval > 0)
        self.policy = greedy_policy(self.q)

    def end_episode(self, trajectory: Trajectory, lr: float, rng: Rng, episode: int) -> None:
        self.buffer.record_trajectory(trajectory)
        for _ in range(self.config.updates_per_episode):
            batch = sample_batch(
                self.buffer, self.config.batch_size, self.config.k, self.mdp.num_goals, rng
            )
            for item in batch:
                usher_update(self.q, self.f, item, self.config, self.policy, lr)
        interval = self.config.target_interval
        if interval and (episode + 1) % interval == 0:
            self.f.snapshot_target()
            self.logger.debug(
                f"Episode {episode + 1}: density target refreshed ({len(self.f)} rows)"
            )


LEARNERS: dict[AgentKind, type[Learner]] = {
    AgentKind.QLEARNING: QLearningLearner,
    AgentKind.HER: HerLearner,
    AgentKind.USHER: UsherLearner,
}


def make_learner(kind: AgentKind, mdp: MultiGoalMdp, config: LearnerConfig) -> Learner:
    """Instantiate the learner registered for ``kind``."""
    return LEARNERS[kind](mdp, config)
