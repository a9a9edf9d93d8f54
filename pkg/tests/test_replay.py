"""Tests for trajectory replay and hindsight relabeling."""

import pytest
from scipy.stats import binomtest

from usher_lab.core.rng import Rng
from usher_lab.exceptions import ContractViolationError, EmptyBufferError
from usher_lab.learning.replay import (
    GoalSource,
    ReplayBuffer,
    Trajectory,
    Transition,
    relabel_her,
    sample_batch,
    sample_uniform_goal,
)


def make_trajectory(
    states: list[int], g_p: int = 9, horizon: int = 5, episode: int = 0
) -> Trajectory:
    """Trajectory through ``states`` where each state is its own goal."""
    trajectory = Trajectory(g_p=g_p, episode_id=episode)
    for step, (s, s_next) in enumerate(zip(states, states[1:])):
        trajectory.append(
            Transition(
                s=s,
                a=0,
                s_next=s_next,
                g_p=g_p,
                t_remaining=horizon - step,
                episode_id=episode,
                step_index=step,
                achieved_goal=s_next,
            )
        )
    return trajectory


class TestTransition:
    """Test episode-end semantics."""

    def test_done_on_pursued_goal(self) -> None:
        transition = Transition(0, 0, 2, 2, 3, 0, 0, 2)
        assert transition.done
        assert not transition.ends_episode_for(1)

    def test_done_on_terminal(self) -> None:
        transition = Transition(0, 0, 3, 2, 3, 0, 0, 3, terminal=True)
        assert transition.done
        assert transition.ends_episode_for(0)


class TestTrajectory:
    """Test trajectory validation."""

    def test_valid(self) -> None:
        make_trajectory([0, 1, 2]).validate()

    def test_empty_rejected(self) -> None:
        with pytest.raises(ContractViolationError, match="empty"):
            Trajectory(g_p=1).validate()

    def test_changing_goal_rejected(self) -> None:
        trajectory = make_trajectory([0, 1])
        trajectory.append(Transition(1, 0, 2, 7, 4, 0, 1, 2))
        with pytest.raises(ContractViolationError, match="g_p"):
            trajectory.validate()

    def test_t_remaining_must_count_down(self) -> None:
        trajectory = make_trajectory([0, 1])
        trajectory.append(Transition(1, 0, 2, 9, 5, 0, 1, 2))
        with pytest.raises(ContractViolationError, match="count down"):
            trajectory.validate()

    def test_achieved_goals(self) -> None:
        assert make_trajectory([0, 3, 4]).achieved_goals().tolist() == [3, 4]


class TestReplayBuffer:
    """Test storage and sampling."""

    def test_empty_buffer_raises(self) -> None:
        with pytest.raises(EmptyBufferError):
            ReplayBuffer().sample_position(Rng(0))

    def test_capacity_evicts_oldest(self) -> None:
        buffer = ReplayBuffer(capacity=2)
        for episode, states in enumerate(([0, 1], [0, 1, 2], [0, 1, 2, 3])):
            buffer.record_trajectory(make_trajectory(states, episode=episode))
        assert buffer.num_episodes == 2
        assert len(buffer) == 5
        assert [t.episode_id for t in buffer.trajectories] == [1, 2]

    def test_invalid_capacity(self) -> None:
        with pytest.raises(ContractViolationError):
            ReplayBuffer(capacity=0)

    def test_invalid_trajectory_rejected(self) -> None:
        with pytest.raises(ContractViolationError):
            ReplayBuffer().record_trajectory(Trajectory(g_p=1))

    def test_sampling_is_uniform_over_transitions(self) -> None:
        buffer = ReplayBuffer()
        buffer.record_trajectory(make_trajectory([0, 1], episode=0))
        buffer.record_trajectory(make_trajectory([0, 1, 2, 3], episode=1))
        rng = Rng(1)
        hits = [buffer.sample_position(rng)[0].episode_id for _ in range(8000)]
        # one of four stored transitions belongs to episode 0
        assert abs(hits.count(0) / 8000 - 0.25) < 0.02

    def test_sample_batch(self) -> None:
        buffer = ReplayBuffer()
        buffer.record_trajectory(make_trajectory([0, 1, 2]))
        batch = sample_batch(buffer, 16, 4, 10, Rng(2))
        assert len(batch) == 16
        for item in batch:
            assert item.alt_goal.source is GoalSource.UNIFORM_SPACE
            assert 0 <= item.alt_goal.g_r < 10
            assert item.goal.source is not GoalSource.UNIFORM_SPACE


class TestRelabelHer:
    """Test the HER goal sampler."""

    def test_last_step_draws_its_own_goal(self) -> None:
        trajectory = make_trajectory([0, 1, 2, 3, 4, 5], horizon=5)
        rng = Rng(3)
        for _ in range(200):
            sample = relabel_her(trajectory, 4, 4, rng)
            if sample.source is GoalSource.HINDSIGHT_FUTURE:
                assert sample.g_r == 5
            else:
                assert sample.g_r == 9

    def test_future_is_clamped_to_padding(self) -> None:
        """An early-ended episode repeats its final goal."""
        trajectory = make_trajectory([0, 1, 2], horizon=10)
        rng = Rng(4)
        goals = {relabel_her(trajectory, 0, 1, rng).g_r for _ in range(500)}
        assert goals == {1, 2, 9}

    def test_keep_probability(self) -> None:
        trajectory = make_trajectory([0, 1, 2], horizon=5)
        rng = Rng(5)
        draws = 20000
        kept = sum(
            relabel_her(trajectory, 0, 8, rng).source is GoalSource.KEPT_POLICY_GOAL
            for _ in range(draws)
        )
        assert binomtest(kept, draws, 1.0 / 9.0).pvalue > 1e-3

    def test_hindsight_never_looks_back(self) -> None:
        trajectory = make_trajectory([0, 1, 2, 3], horizon=3)
        rng = Rng(6)
        for _ in range(300):
            sample = relabel_her(trajectory, 1, 2, rng)
            if sample.source is GoalSource.HINDSIGHT_FUTURE:
                assert sample.g_r in (2, 3)

    def test_bad_arguments(self) -> None:
        trajectory = make_trajectory([0, 1])
        with pytest.raises(ContractViolationError):
            relabel_her(trajectory, 1, 4, Rng(0))
        with pytest.raises(ContractViolationError):
            relabel_her(trajectory, 0, 0, Rng(0))
        with pytest.raises(ContractViolationError):
            sample_uniform_goal(0, Rng(0))
