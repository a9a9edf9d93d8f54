"""Tests for the tabular learners and their update rules."""

import numpy as np
import pytest

from usher_lab.core.mdp import MultiGoalMdp
from usher_lab.core.rng import Rng
from usher_lab.core.rollout import PolicyTable
from usher_lab.exceptions import ContractViolationError
from usher_lab.harness.config import parse_config
from usher_lab.harness.training import train
from usher_lab.learning.agents import (
    HerLearner,
    QLearningLearner,
    UsherLearner,
    behavior_action,
    compute_w,
    greedy_action,
    greedy_policy,
    learning_rate,
    make_learner,
    q_update_vanilla,
    usher_update,
)
from usher_lab.learning.density import FTable
from usher_lab.learning.qtable import QTable
from usher_lab.learning.replay import BatchItem, GoalSample, GoalSource, Trajectory, Transition
from usher_lab.oracle.dp import exact_successor_density
from usher_lab.types import AgentKind, FUpdateMode, LearnerConfig

GAMMA = 0.825


def chain_trajectory(horizon: int = 6) -> Trajectory:
    """Walk right from 0 to the goal 4 of the five-state chain."""
    trajectory = Trajectory(g_p=4)
    for step in range(4):
        trajectory.append(Transition(step, 0, step + 1, 4, horizon - step, 0, step, step + 1))
    return trajectory


def exact_corridor_density(mdp: MultiGoalMdp) -> tuple[PolicyTable, FTable]:
    """Always-right policy and its exact density rows for the goal 4."""
    right = PolicyTable.constant(mdp.num_states, mdp.num_goals, 0)
    exact = exact_successor_density(mdp, right, g_p=4)
    f = FTable(mdp.num_goals)
    for s in range(mdp.num_states):
        for t_remaining in range(1, mdp.horizon + 1):
            f.set_row((s, 0, 4, t_remaining), exact.row(s, 0, t_remaining))
    return right, f


class TestLearningRate:
    """Test the per-episode schedule."""

    def test_decay(self) -> None:
        config = LearnerConfig(lr0=0.5, lr_decay=0.75)
        assert learning_rate(config, 0) == pytest.approx(0.5)
        assert learning_rate(config, 15) == pytest.approx(0.0625)

    def test_constant_without_decay(self) -> None:
        config = LearnerConfig(lr0=0.2, lr_decay=0.0)
        assert learning_rate(config, 99) == pytest.approx(0.2)


class TestActionSelection:
    """Test greedy and epsilon-greedy choices."""

    def test_ties_pick_lowest_action(self) -> None:
        assert greedy_action(QTable(3), 0, 1) == 0

    def test_greedy_reads_diagonal(self) -> None:
        q = QTable(3)
        q.set_value(0, 2, 1, 1, 0.5)
        q.set_value(0, 1, 0, 1, 0.9)  # off-diagonal, ignored
        assert greedy_action(q, 0, 1) == 2

    def test_epsilon_zero_is_greedy(self) -> None:
        q = QTable(3)
        q.set_value(0, 1, 2, 2, 1.0)
        rng = Rng(0)
        assert {behavior_action(q, 0, 2, 0.0, rng) for _ in range(50)} == {1}

    def test_epsilon_one_explores(self) -> None:
        rng = Rng(1)
        assert {behavior_action(QTable(3), 0, 2, 1.0, rng) for _ in range(200)} == {0, 1, 2}

    def test_invalid_epsilon(self) -> None:
        with pytest.raises(ContractViolationError):
            behavior_action(QTable(3), 0, 0, 1.5, Rng(0))

    def test_time_conditioned_policy(self) -> None:
        q = QTable(2, t_conditioned=True)
        q.set_value(0, 1, 3, 3, 1.0, t_remaining=2)
        policy = greedy_policy(q)
        assert policy(0, 3, 2) == 1
        assert policy(0, 3, 1) == 0


class TestQUpdates:
    """Test the single-goal TD step."""

    def test_reaching_goal_moves_by_lr(self) -> None:
        q = QTable(3)
        q_update_vanilla(q, Transition(3, 0, 4, 4, 1, 0, 0, 4), 4, 0.3, GAMMA)
        assert q.value(3, 0, 4, 4) == pytest.approx(0.3)

    def test_bootstraps_from_next_state(self) -> None:
        q = QTable(3)
        q.set_value(2, 1, 4, 4, 0.5)
        q_update_vanilla(q, Transition(1, 0, 2, 4, 3, 0, 0, 2), 4, 0.4, GAMMA)
        assert q.value(1, 0, 4, 4) == pytest.approx(0.4 * GAMMA * 0.5)

    def test_no_bootstrap_after_terminal(self) -> None:
        q = QTable(2)
        q.set_value(3, 0, 2, 2, 1.0)
        q_update_vanilla(q, Transition(0, 0, 3, 2, 4, 0, 0, 3, terminal=True), 2, 1.0, GAMMA)
        assert q.value(0, 0, 2, 2) == 0.0

    def test_zero_steps_left_rejected(self) -> None:
        with pytest.raises(ContractViolationError):
            q_update_vanilla(QTable(2), Transition(0, 0, 1, 4, 0, 0, 0, 1), 4, 0.1, GAMMA)


class TestUsherUpdate:
    """Test the importance-weighted two-goal update."""

    def test_unit_alpha_moves_only_the_uniform_goal(self) -> None:
        config = LearnerConfig(
            alpha_q=1.0, goal_rate_correction=False, f_update=FUpdateMode.DENSE, gamma=GAMMA
        )
        q = QTable(3)
        f = FTable(5)
        item = BatchItem(
            Transition(0, 0, 1, 4, 3, 0, 0, 1),
            GoalSample(2, GoalSource.HINDSIGHT_FUTURE),
            GoalSample(1, GoalSource.UNIFORM_SPACE),
        )
        usher_update(q, f, item, config, greedy_policy(q), 0.3)
        assert q.value(0, 0, 2, 4) == 0.0
        assert q.value(0, 0, 1, 4) == pytest.approx(0.3)

    def test_kept_goal_weight(self) -> None:
        """A kept goal steps by ``lr (1 - alpha_Q)``."""
        config = LearnerConfig(alpha_q=0.25, clip=10.0, goal_rate_correction=False, gamma=GAMMA)
        q = QTable(3)
        f = FTable(5)
        item = BatchItem(
            Transition(3, 0, 4, 4, 1, 0, 0, 4),
            GoalSample(4, GoalSource.KEPT_POLICY_GOAL),
            GoalSample(0, GoalSource.UNIFORM_SPACE),
        )
        usher_update(q, f, item, config, greedy_policy(q), 0.4)
        assert q.value(3, 0, 4, 4) == pytest.approx(0.3)
        assert q.value(3, 0, 0, 4) == 0.0

    def test_density_table_is_updated(self) -> None:
        config = LearnerConfig(gamma=GAMMA)
        q = QTable(3)
        f = FTable(5)
        item = BatchItem(
            Transition(0, 0, 1, 4, 3, 0, 0, 1),
            GoalSample(1, GoalSource.HINDSIGHT_FUTURE),
            GoalSample(3, GoalSource.UNIFORM_SPACE),
        )
        usher_update(q, f, item, config, greedy_policy(q), 0.5)
        assert (0, 0, 4, 3) in f

    def test_compute_w_with_unit_alpha(self) -> None:
        q = QTable(3)
        w = compute_w(FTable(5), Transition(0, 0, 1, 4, 3, 0, 0, 1), 2, 1.0, greedy_policy(q))
        assert w == pytest.approx(1.0)

    def test_compute_w_for_unreachable_goal(self) -> None:
        """A goal ``s'`` cannot lead to gets weight ``1 / alpha``."""
        q = QTable(3)
        transition = Transition(0, 0, 1, 4, 1, 0, 0, 1)
        assert compute_w(FTable(5), transition, 3, 0.5, greedy_policy(q)) == pytest.approx(2.0)


class TestLearners:
    """Test the learner classes end to end on a hand-built episode."""

    @pytest.mark.parametrize(
        ("kind", "cls"),
        [
            (AgentKind.QLEARNING, QLearningLearner),
            (AgentKind.HER, HerLearner),
            (AgentKind.USHER, UsherLearner),
        ],
    )
    def test_make_learner(self, chain_mdp: MultiGoalMdp, kind: AgentKind, cls: type) -> None:
        learner = make_learner(kind, chain_mdp, LearnerConfig(gamma=GAMMA))
        assert isinstance(learner, cls)
        assert learner.kind is kind

    def test_qlearning_replays_pursued_goal(self, chain_mdp: MultiGoalMdp) -> None:
        learner = make_learner(
            AgentKind.QLEARNING, chain_mdp, LearnerConfig(batch_size=64, gamma=GAMMA)
        )
        assert isinstance(learner, QLearningLearner)
        learner.end_episode(chain_trajectory(), 0.5, Rng(0), 0)
        assert learner.buffer.num_episodes == 1
        assert learner.q.value(3, 0, 4, 4) > 0.0
        # no hindsight relabeling
        assert learner.q.value(2, 0, 3, 3) == 0.0
        assert len(learner.q) <= 4

    def test_her_replays_episode(self, chain_mdp: MultiGoalMdp) -> None:
        learner = make_learner(
            AgentKind.HER, chain_mdp, LearnerConfig(batch_size=16, gamma=GAMMA)
        )
        learner.end_episode(chain_trajectory(), 0.5, Rng(0), 0)
        assert learner.buffer.num_episodes == 1
        assert len(learner.q) > 0

    def test_usher_refreshes_target(self, chain_mdp: MultiGoalMdp) -> None:
        config = LearnerConfig(batch_size=16, target_interval=2, gamma=GAMMA)
        learner = make_learner(AgentKind.USHER, chain_mdp, config)
        assert isinstance(learner, UsherLearner)
        learner.end_episode(chain_trajectory(), 0.5, Rng(1), 0)
        key = next(iter(learner.f.keys()))
        assert learner.f.row(*key, target=True).tolist() == pytest.approx([0.2] * 5)
        learner.end_episode(chain_trajectory(), 0.5, Rng(2), 1)
        assert learner.f.row(*key, target=True).tolist() == pytest.approx(
            learner.f.row(*key).tolist()
        )

    def test_greedy_policy_after_learning(self, chain_mdp: MultiGoalMdp) -> None:
        learner = make_learner(
            AgentKind.QLEARNING, chain_mdp, LearnerConfig(batch_size=64, gamma=GAMMA)
        )
        learner.end_episode(chain_trajectory(), 1.0, Rng(3), 0)
        policy = learner.policy_table()
        assert policy(3, 4, 1) == 0
        assert learner.start_values()[3, 4] == pytest.approx(1.0)


class TestFixedPoints:
    """Test where the learners settle on small corridors."""

    def test_her_matches_qlearning_on_deterministic_corridor(
        self, chain_mdp: MultiGoalMdp
    ) -> None:
        config = LearnerConfig(batch_size=16, epsilon=0.0, gamma=GAMMA)
        her = make_learner(AgentKind.HER, chain_mdp, config)
        vanilla = make_learner(AgentKind.QLEARNING, chain_mdp, config)
        rng = Rng(4)
        for episode in range(300):
            her.end_episode(chain_trajectory(), 0.5, rng, episode)
            vanilla.end_episode(chain_trajectory(), 0.5, rng, episode)
        for s in range(4):
            expected = GAMMA ** (3 - s)
            assert her.q.value(s, 0, 4, 4) == pytest.approx(expected, rel=1e-6)
            assert vanilla.q.value(s, 0, 4, 4) == pytest.approx(expected, rel=1e-6)

    def test_exact_density_gives_unit_weights(self, chain_mdp: MultiGoalMdp) -> None:
        """Deterministic moves make ``h(. | s', T)`` equal ``f(. | s, a, T)``."""
        right, f = exact_corridor_density(chain_mdp)
        for transition in chain_trajectory().transitions:
            row = f.row(transition.s, 0, 4, transition.t_remaining)
            for g_r in np.flatnonzero(row > 0.0):
                w = compute_w(f, transition, int(g_r), 0.1, right)
                assert w == pytest.approx(1.0)

    def test_usher_step_with_exact_density_is_her_step(
        self, chain_mdp: MultiGoalMdp
    ) -> None:
        """With unit weights only the ``1 - alpha_Q`` factor separates the two updates."""
        right, f = exact_corridor_density(chain_mdp)
        config = LearnerConfig(alpha_q=0.1, clip=10.0, gamma=GAMMA)
        transition = chain_trajectory().transitions[1]
        item = BatchItem(
            transition,
            GoalSample(3, GoalSource.HINDSIGHT_FUTURE),
            # unreachable from s = 1 under the policy, so the uniform branch is silent
            GoalSample(0, GoalSource.UNIFORM_SPACE),
        )
        q = QTable(3)
        q.set_value(2, 0, 3, 4, 0.6)
        usher_update(q, f, item, config, right, 0.5)

        reference = QTable(3)
        reference.set_value(2, 0, 3, 4, 0.6)
        reference.td_step(1, 0, 3, 4, GAMMA * 0.6, 0.5 * (1.0 - 0.1))
        assert q.value(1, 0, 3, 4) == pytest.approx(reference.value(1, 0, 3, 4))
        assert q.value(1, 0, 0, 4) == 0.0


class TestLearningRuns:
    """Train USHER end to end on the deterministic corridor."""

    @pytest.mark.parametrize("alpha_q", [0.01, 0.1])
    def test_usher_learns_corridor_values(self, alpha_q: float) -> None:
        config = parse_config(
            {
                "env": {"kind": "chain", "chain_length": 5, "horizon": 6, "gamma": 0.9},
                "agent": {
                    "kind": "usher",
                    "alpha_q": alpha_q,
                    "lr0": 0.5,
                    "lr_decay": 0.5,
                    "batch_size": 16,
                },
                "train": {"episodes": 150, "seed": 7, "eval_interval": 50, "eval_episodes": 20},
            }
        )
        outcome = train(config)
        assert outcome.metrics.final.success_rate == 1.0
        assert outcome.learner.start_values()[0, 4] == pytest.approx(0.9**3, abs=0.05)
