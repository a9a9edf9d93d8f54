"""Tests for greedy-policy evaluation and the start-state bias."""

import numpy as np
import pytest

from usher_lab.core.mdp import MultiGoalMdp
from usher_lab.core.rng import Rng
from usher_lab.core.rollout import PolicyTable, rollout
from usher_lab.exceptions import ContractViolationError
from usher_lab.oracle.dp import value_iteration
from usher_lab.oracle.evaluation import bias_estimate, bias_from_rollouts, evaluate_policy

GAMMA = 0.825


class TestEvaluatePolicy:
    """Test success rates and returns."""

    def test_chain(self, chain_mdp: MultiGoalMdp) -> None:
        policy = PolicyTable.constant(chain_mdp.num_states, chain_mdp.num_goals, 0)
        result = evaluate_policy(chain_mdp, policy, 10, Rng(0))
        assert result.episodes == 10
        assert result.success_rate == 1.0
        assert result.mean_return == pytest.approx(GAMMA**3)

    def test_hazard_fail_rate(self, hazard_mdp: MultiGoalMdp) -> None:
        policy = value_iteration(hazard_mdp).policy_table(hazard_mdp.num_goals)
        result = evaluate_policy(hazard_mdp, policy, 10000, Rng(1))
        assert abs(result.flag_rates["fail"] - 0.75) < 0.02
        assert abs(result.success_rate - 0.25) < 0.02

    def test_needs_episodes(self, chain_mdp: MultiGoalMdp) -> None:
        policy = PolicyTable.constant(chain_mdp.num_states, chain_mdp.num_goals, 0)
        with pytest.raises(ContractViolationError):
            evaluate_policy(chain_mdp, policy, 0, Rng(0))


class TestBias:
    """Test the start-state bias estimate."""

    def test_exact_values_are_unbiased(self, hazard_mdp: MultiGoalMdp) -> None:
        exact = value_iteration(hazard_mdp)
        values = exact.start_values(hazard_mdp.num_goals)
        policy = exact.policy_table(hazard_mdp.num_goals)
        report = bias_estimate(values, hazard_mdp, policy, 20000, GAMMA, Rng(2))
        assert abs(report.bias) < 0.02
        assert report.mean_prediction == pytest.approx(0.25 * GAMMA)
        assert 0.0 < report.ci_half_width < 0.02

    def test_overestimate_is_positive(self, hazard_mdp: MultiGoalMdp) -> None:
        policy = value_iteration(hazard_mdp).policy_table(hazard_mdp.num_goals)
        values = np.ones((hazard_mdp.num_states, hazard_mdp.num_goals))
        report = bias_estimate(values, hazard_mdp, policy, 5000, GAMMA, Rng(3))
        assert report.bias > 0.7

    def test_returns_rediscounted(self, chain_mdp: MultiGoalMdp) -> None:
        policy = PolicyTable.constant(chain_mdp.num_states, chain_mdp.num_goals, 0)
        batch = rollout(chain_mdp, policy, 4, Rng(4))
        values = np.zeros((chain_mdp.num_states, chain_mdp.num_goals))
        assert bias_from_rollouts(values, batch).mean_return == pytest.approx(GAMMA**3)
        assert bias_from_rollouts(values, batch, gamma=0.5).mean_return == pytest.approx(0.125)

    def test_needs_episodes(self, hazard_mdp: MultiGoalMdp) -> None:
        policy = PolicyTable.constant(hazard_mdp.num_states, hazard_mdp.num_goals, 0)
        values = np.zeros((4, 4))
        with pytest.raises(ContractViolationError):
            bias_estimate(values, hazard_mdp, policy, 0, GAMMA, Rng(0))
