"""Tests for the dynamic-programming oracles."""

from pathlib import Path

import numpy as np
import pytest

from usher_lab.core.mdp import MultiGoalMdp
from usher_lab.core.rollout import PolicyTable
from usher_lab.envs.chains import HAZARD_GOAL, HAZARD_MID, HAZARD_START
from usher_lab.exceptions import ContractViolationError
from usher_lab.oracle.dp import (
    bellman_residual,
    exact_successor_density,
    recursion_residual,
    value_iteration,
)

GAMMA = 0.825


class TestValueIteration:
    """Test the finite-horizon optimal values."""

    def test_hazard_chain(self, hazard_mdp: MultiGoalMdp) -> None:
        exact = value_iteration(hazard_mdp)
        assert exact.q(HAZARD_START, 0, HAZARD_GOAL) == pytest.approx(0.25 * GAMMA)
        assert exact.q(HAZARD_MID, 0, HAZARD_GOAL) == pytest.approx(1.0)
        # one step left is not enough from the start
        assert exact.state_value(HAZARD_START, HAZARD_GOAL, t_remaining=1) == 0.0

    def test_sweeps_and_residual(self, risky_mdp: MultiGoalMdp) -> None:
        exact = value_iteration(risky_mdp)
        assert exact.sweep_deltas.shape == (risky_mdp.horizon,)
        assert bellman_residual(risky_mdp, exact) < 1e-12
        # each sweep contracts the previous change by at least gamma
        assert np.all(np.diff(exact.sweep_deltas) <= 1e-15)
        assert exact.sweep_deltas[-1] < 1e-6

    def test_single_goal(self, hazard_mdp: MultiGoalMdp) -> None:
        exact = value_iteration(hazard_mdp, goal=HAZARD_GOAL)
        assert exact.goals.tolist() == [HAZARD_GOAL]
        assert exact.state_value(HAZARD_START, HAZARD_GOAL) == pytest.approx(0.25 * GAMMA)
        with pytest.raises(ContractViolationError):
            exact.q(HAZARD_START, 0, HAZARD_MID)

    def test_unknown_goal_rejected(self, hazard_mdp: MultiGoalMdp) -> None:
        with pytest.raises(ContractViolationError):
            value_iteration(hazard_mdp, goal=9)

    def test_start_values_cover_all_goals(self, hazard_mdp: MultiGoalMdp) -> None:
        values = value_iteration(hazard_mdp).start_values(hazard_mdp.num_goals)
        assert values.shape == (4, 4)
        assert values[HAZARD_START, HAZARD_GOAL] == pytest.approx(0.25 * GAMMA)

    def test_policy_table(self, hazard_mdp: MultiGoalMdp) -> None:
        policy = value_iteration(hazard_mdp).policy_table(hazard_mdp.num_goals)
        assert policy.time_dependent
        assert policy(HAZARD_START, HAZARD_GOAL, 4) == 0
        assert policy(HAZARD_MID, HAZARD_GOAL, 1) == 0

    def test_dump(self, hazard_mdp: MultiGoalMdp, temp_dir: Path) -> None:
        path = temp_dir / "oracle" / "qstar.npz"
        value_iteration(hazard_mdp).dump(path)
        with np.load(path) as archive:
            assert archive["q"].shape == (4, 4, 2)
            assert int(archive["horizon"]) == 4
            assert float(archive["gamma"]) == pytest.approx(GAMMA)


class TestSuccessorDensity:
    """Test the exact successor-goal recursion."""

    def test_deterministic_chain_rows(self, chain_mdp: MultiGoalMdp) -> None:
        right = PolicyTable.constant(chain_mdp.num_states, chain_mdp.num_goals, 0)
        exact = exact_successor_density(chain_mdp, right, g_p=4)
        assert exact.row(0, 0, 1).tolist() == [0, 1, 0, 0, 0]
        assert exact.row(0, 0, 2).tolist() == pytest.approx([0, 0.5, 0.5, 0, 0])

    def test_absorbing_next_state(self, hazard_mdp: MultiGoalMdp) -> None:
        policy = PolicyTable.constant(hazard_mdp.num_states, hazard_mdp.num_goals, 0)
        exact = exact_successor_density(hazard_mdp, policy, g_p=HAZARD_GOAL)
        assert exact.row(HAZARD_MID, 0, 3).tolist() == [0, 0, 1, 0]

    def test_rows_are_normalised(self, risky_mdp: MultiGoalMdp) -> None:
        policy = value_iteration(risky_mdp).policy_table(risky_mdp.num_goals)
        goal = int(risky_mdp.policy_goals[0])
        exact = exact_successor_density(risky_mdp, policy, goal)
        assert exact.normalization_error() < 1e-12
        assert recursion_residual(risky_mdp, policy, exact) < 1e-12

    def test_row_bounds(self, hazard_mdp: MultiGoalMdp) -> None:
        policy = PolicyTable.constant(hazard_mdp.num_states, hazard_mdp.num_goals, 0)
        exact = exact_successor_density(hazard_mdp, policy, HAZARD_GOAL, t_max=2)
        assert exact.t_max == 2
        with pytest.raises(ContractViolationError):
            exact.row(0, 0, 0)
        with pytest.raises(ContractViolationError):
            exact.row(0, 0, 3)

    def test_dump(self, hazard_mdp: MultiGoalMdp, temp_dir: Path) -> None:
        policy = PolicyTable.constant(hazard_mdp.num_states, hazard_mdp.num_goals, 0)
        path = temp_dir / "fstar.npz"
        exact_successor_density(hazard_mdp, policy, HAZARD_GOAL).dump(path)
        with np.load(path) as archive:
            assert archive["densities"].shape == (5, 4, 2, 4)
            assert int(archive["g_p"]) == HAZARD_GOAL
