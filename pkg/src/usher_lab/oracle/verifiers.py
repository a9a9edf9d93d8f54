"""Statistical and exact checks of the hindsight bias and its correction.

``verify_bias_ratio`` simulates HER relabeling and compares the empirical law
of ``s'`` given the sampled goal with ``P(s' | s, a) h(g_r | s', T) / f(g_r | s, a, T)``.
``verify_mixture_identity`` checks by exact summation that the importance
weight turns the hindsight/uniform mixture back into ``P(s' | s, a)``.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import norm

from ..constants import IDENTITY_TOLERANCE, MIN_BIN_VISITS
from ..core.mdp import MultiGoalMdp
from ..core.rng import Rng
from ..core.rollout import PolicyTable, rollout
from ..exceptions import ContractViolationError
from ..learning.weights import importance_weights
from ..utils.logger import get_logger
from .dp import ExactF, exact_successor_density

WeightFn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]

_KEPT, _HINDSIGHT = 0, 1


@dataclass(frozen=True)
class BiasRatioReport:
    """Outcome of the Monte-Carlo bias-ratio check.

    Attributes:
        trajectories: Simulated episodes
        bins_checked: ``(s, a, T, g_p, g_r, source)`` bins with enough visits
        bins_excluded: Bins skipped for having fewer than ``min_visits`` samples
        cells_tested: Non-degenerate ``(bin, s')`` probabilities tested
        max_deviation: Largest ``|empirical - predicted|`` probability
        max_z: Largest standardised deviation
        z_threshold: Family-wise corrected bound on ``max_z``
        impossible_outcomes: Observed ``s'`` that the prediction gives probability 0
        hindsight_suppression: Largest predicted drop below ``P(s' | s, a)``
    """

    trajectories: int
    bins_checked: int
    bins_excluded: int
    cells_tested: int
    max_deviation: float
    max_z: float
    z_threshold: float
    impossible_outcomes: int
    hindsight_suppression: float

    @property
    def passed(self) -> bool:
        return self.impossible_outcomes == 0 and self.max_z <= self.z_threshold


@dataclass(frozen=True)
class MixtureReport:
    """Outcome of the exact mixture-identity check."""

    alpha: float
    cases: int
    max_discrepancy: float
    tolerance: float = IDENTITY_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.max_discrepancy <= self.tolerance


def familywise_threshold(tests: int, sigma: float = 3.0) -> float:
    """Two-sided z bound keeping the family-wise error at the ``sigma`` level.

    Uses the Sidak correction over ``tests`` independent comparisons.
    """
    family_alpha = 2.0 * norm.sf(sigma)
    if tests <= 1:
        return sigma
    per_test = -np.expm1(np.log1p(-family_alpha) / tests)
    return float(norm.isf(per_test / 2.0))


def default_test_functions(mdp: MultiGoalMdp) -> list[np.ndarray]:
    """Constant, terminal indicator, policy-goal indicator and a fixed random vector."""
    functions = [
        np.ones(mdp.num_states),
        mdp.terminal.astype(np.float64),
        np.isin(mdp.goal_map, mdp.policy_goals).astype(np.float64),
        np.asarray(Rng(20240).random(mdp.num_states)),
    ]
    return functions


def verify_mixture_identity(
    mdp: MultiGoalMdp,
    policy: PolicyTable,
    alpha: float,
    test_functions: Optional[Sequence[np.ndarray]] = None,
    weight_fn: WeightFn = importance_weights,
    goals: Optional[Sequence[int]] = None,
) -> MixtureReport:
    """Check ``alpha E_P[W F] + (1 - alpha) E_cond[W F] = E_P[F]`` exactly.

    The conditional law is ``P(s' | s, a) h(g_r | s', T) / f(g_r | s, a, T)``
    and the identity is evaluated for every ``(s, a, g_r, g_p, T)`` with
    ``f > 0``.

    Args:
        mdp: Small enumerable environment
        policy: Policy defining the successor densities
        alpha: Mixture fraction in ``(0, 1]``
        test_functions: ``(S,)`` vectors ``F``; defaults to ``default_test_functions``
        weight_fn: ``W(f, h, alpha)``; replaceable to test a wrong formula
        goals: Pursued goals to cover; the MDP's policy goals by default
    """
    if not 0.0 < alpha <= 1.0:
        raise ContractViolationError("alpha must lie in (0, 1]")
    functions = np.array(
        list(test_functions) if test_functions is not None else default_test_functions(mdp)
    )
    pursued = mdp.policy_goals if goals is None else goals
    transition = mdp.transition
    expected = np.einsum("sap,kp->ksa", transition, functions)

    worst = 0.0
    cases = 0
    for g_p in pursued:
        exact = exact_successor_density(mdp, policy, int(g_p))
        for t in range(1, exact.t_max + 1):
            f = exact.densities[t]
            h = exact.successors[t]
            support = f > 0.0
            weights = weight_fn(f[:, :, None, :], h[None, None, :, :], alpha)
            safe_f = np.where(support, f, 1.0)[:, :, None, :]
            conditional = transition[..., None] * h[None, None, :, :] / safe_f
            mixture = alpha * transition[..., None] + (1.0 - alpha) * conditional
            lhs = np.einsum("sapg,kp->ksag", mixture * weights, functions)
            gap = np.abs(lhs - expected[..., None])
            gap = np.where(support[None], gap, 0.0)
            worst = max(worst, float(gap.max()))
            cases += int(support.sum()) * len(functions)
    return MixtureReport(alpha=alpha, cases=cases, max_discrepancy=worst)


def _exact_for_goals(
    mdp: MultiGoalMdp, policy: PolicyTable, goals: np.ndarray
) -> dict[int, ExactF]:
    return {int(g): exact_successor_density(mdp, policy, int(g)) for g in np.unique(goals)}


def verify_bias_ratio(
    mdp: MultiGoalMdp,
    policy: PolicyTable,
    n_trajectories: int,
    rng: Rng,
    k: int = 8,
    min_visits: int = MIN_BIN_VISITS,
    sigma: float = 3.0,
) -> BiasRatioReport:
    """Monte-Carlo check of the hindsight conditional next-state law.

    Every real transition of every simulated episode is relabeled once, HER
    style. Transitions are binned by ``(s, a, T, g_p, g_r, source)``; bins with
    at least ``min_visits`` samples compare their empirical ``s'`` frequencies
    against the predicted law (``P`` itself for kept policy goals).

    Args:
        mdp: Small enumerable environment
        policy: Policy followed by the simulated episodes
        n_trajectories: Number of episodes
        rng: Random stream
        k: Hindsight goals per kept goal
        min_visits: Smallest bin that is asserted on
        sigma: Family-wise significance expressed in normal standard deviations
    """
    if n_trajectories < 1:
        raise ContractViolationError("n_trajectories must be positive")
    logger = get_logger()
    horizon = mdp.horizon
    num_states, num_actions, num_goals = mdp.num_states, mdp.num_actions, mdp.num_goals
    batch = rollout(mdp, policy, n_trajectories, rng)
    states, actions, goals = batch.states, batch.actions, batch.goals

    keys = []
    next_states = []
    for step in range(horizon):
        live = batch.lengths > step
        if not live.any():
            break
        t_remaining = horizon - step
        kept = rng.random(n_trajectories) < 1.0 / (k + 1)
        future = step + np.floor(rng.random(n_trajectories) * t_remaining).astype(np.int64)
        hindsight_goal = mdp.goal_map[states[np.arange(n_trajectories), future + 1]]
        g_r = np.where(kept, goals, hindsight_goal)
        source = np.where(kept, _KEPT, _HINDSIGHT)
        key = states[:, step]
        for value, size in (
            (actions[:, step], num_actions),
            (np.full(n_trajectories, t_remaining), horizon + 1),
            (goals, num_goals),
            (g_r, num_goals),
            (source, 2),
        ):
            key = key * size + value
        keys.append(key[live])
        next_states.append(states[live, step + 1])

    all_keys = np.concatenate(keys)
    flat = all_keys * num_states + np.concatenate(next_states)
    cells, counts = np.unique(flat, return_counts=True)
    cell_bins, cell_next = np.divmod(cells, num_states)
    bins, bin_totals = np.unique(all_keys, return_counts=True)
    exact = _exact_for_goals(mdp, policy, goals)

    max_deviation = 0.0
    suppression = 0.0
    z_scores: list[float] = []
    impossible = 0
    checked = 0
    for bin_key, total in zip(bins.tolist(), bin_totals.tolist()):
        if total < min_visits:
            continue
        checked += 1
        rest, source = divmod(bin_key, 2)
        rest, g_r = divmod(rest, num_goals)
        rest, g_p = divmod(rest, num_goals)
        rest, t_remaining = divmod(rest, horizon + 1)
        s, a = divmod(rest, num_actions)

        prior = mdp.transition[s, a]
        if source == _KEPT:
            predicted = prior
        else:
            ef = exact[g_p]
            exact_row = ef.successors[t_remaining][:, g_r]
            predicted = prior * exact_row / ef.densities[t_remaining, s, a, g_r]
            suppression = max(suppression, float((prior - predicted).max()))

        observed = np.zeros(num_states)
        in_bin = cell_bins == bin_key
        observed[cell_next[in_bin]] = counts[in_bin]
        empirical = observed / total
        max_deviation = max(max_deviation, float(np.abs(empirical - predicted).max()))
        impossible += int(((predicted == 0.0) & (observed > 0)).sum())
        open_cells = (predicted > 0.0) & (predicted < 1.0)
        p = predicted[open_cells]
        spread = np.sqrt(p * (1.0 - p) / total)
        z_scores.extend((np.abs(empirical[open_cells] - p) / spread).tolist())

    threshold = familywise_threshold(len(z_scores), sigma)
    report = BiasRatioReport(
        trajectories=n_trajectories,
        bins_checked=checked,
        bins_excluded=int((bin_totals < min_visits).sum()),
        cells_tested=len(z_scores),
        max_deviation=max_deviation,
        max_z=max(z_scores, default=0.0),
        z_threshold=threshold,
        impossible_outcomes=impossible,
        hindsight_suppression=suppression,
    )
    logger.debug(
        f"Bias ratio on {mdp.name}: {checked} bins, max z {report.max_z:.3f} "
        f"(bound {threshold:.3f}), {report.bins_excluded} sparse bins excluded"
    )
    return report
