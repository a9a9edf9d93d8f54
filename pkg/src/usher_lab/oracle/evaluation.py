"""Greedy-policy evaluation and start-state bias."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..core.mdp import MultiGoalMdp
from ..core.rng import Rng
from ..core.rollout import PolicyTable, RolloutBatch, rollout
from ..exceptions import ContractViolationError

# two-sided 95% normal quantile
CI_Z = 1.96


@dataclass(frozen=True)
class EvaluationResult:
    """Success rate, mean discounted return and flagged-state visit rates."""

    episodes: int
    success_rate: float
    mean_return: float
    flag_rates: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class BiasReport:
    """Predicted start value minus realised return; positive means overestimation."""

    episodes: int
    mean_return: float
    mean_prediction: float
    bias: float
    ci_half_width: float


def summarize_rollouts(mdp: MultiGoalMdp, batch: RolloutBatch) -> EvaluationResult:
    """Aggregate a rollout batch into an EvaluationResult."""
    return EvaluationResult(
        episodes=int(batch.returns.size),
        success_rate=float(batch.successes.mean()),
        mean_return=float(batch.returns.mean()),
        flag_rates={name: float(batch.visited(mask).mean()) for name, mask in mdp.flags.items()},
    )


def bias_from_rollouts(
    values: np.ndarray, batch: RolloutBatch, gamma: Optional[float] = None
) -> BiasReport:
    """Compare predicted ``V(s0, g_p)`` with the realised discounted returns.

    Args:
        values: ``(S, G)`` predicted start values
        batch: Rollouts of the greedy policy
        gamma: Discount for the returns; the rollout's own when ``None``
    """
    if gamma is None:
        returns = batch.returns
    else:
        # sparse reward: a single payment on the arrival step
        returns = np.where(batch.successes, gamma ** np.maximum(batch.lengths - 1, 0), 0.0)
    predictions = values[batch.starts, batch.goals]
    gaps = predictions - returns
    n = gaps.size
    spread = float(gaps.std(ddof=1)) if n > 1 else 0.0
    return BiasReport(
        episodes=n,
        mean_return=float(returns.mean()),
        mean_prediction=float(predictions.mean()),
        bias=float(gaps.mean()),
        ci_half_width=CI_Z * spread / np.sqrt(n),
    )


def evaluate_policy(
    mdp: MultiGoalMdp, policy: PolicyTable, n_episodes: int, rng: Rng
) -> EvaluationResult:
    """Roll out the greedy policy and report success and return.

    Success means the pursued goal is achieved within the horizon.
    """
    if n_episodes < 1:
        raise ContractViolationError("n_episodes must be positive")
    return summarize_rollouts(mdp, rollout(mdp, policy, n_episodes, rng))


def bias_estimate(
    agent_values: np.ndarray,
    mdp: MultiGoalMdp,
    policy: PolicyTable,
    n_episodes: int,
    gamma: float,
    rng: Rng,
) -> BiasReport:
    """Start-state bias of ``agent_values`` under ``policy``.

    Args:
        agent_values: ``(S, G)`` predicted ``V(s0, g_p) = max_a Q(s0, a, g_p, g_p)``
        mdp: Environment
        policy: Greedy policy derived from the same values
        n_episodes: Number of evaluation episodes
        gamma: Discount applied to realised rewards
        rng: Random stream

    Returns:
        BiasReport with a 95% normal confidence half-width
    """
    if n_episodes < 1:
        raise ContractViolationError("n_episodes must be positive")
    batch = rollout(mdp, policy, n_episodes, rng)
    return bias_from_rollouts(agent_values, batch, gamma)
