"""Verification suite over the bundled small MDPs.

Each check yields one ``CheckResult``: a name, the measured value, the bound it
is held to and the verdict. The CLI prints them one per line and exits with
status 2 when any of them fails.
"""

from collections import Counter
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from rich.table import Table
from scipy.stats import binomtest, norm

from ..constants import IDENTITY_TOLERANCE
from ..core.mdp import MultiGoalMdp
from ..core.rng import Rng
from ..core.rollout import PolicyTable, RolloutBatch, rollout
from ..envs.chains import build_chain, build_hazard_chain
from ..envs.gridmap import default_map_path, load_grid_map, parse_grid_map
from ..envs.gridworld import build_risky_gridworld
from ..learning.density import FTable, f_update_dense, f_update_sampled
from ..learning.replay import Trajectory, Transition, relabel_her, sample_uniform_goal
from ..learning.weights import clip_ratio, importance_weights
from ..oracle.dp import (
    ExactF,
    bellman_residual,
    exact_successor_density,
    recursion_residual,
    value_iteration,
)
from ..oracle.verifiers import WeightFn, verify_bias_ratio, verify_mixture_identity
from ..types import VerifyConfig
from ..ui.progress import track_progress
from ..ui.styles import create_table, style_verdict
from ..utils.logger import get_logger

SMALL_HORIZON = 4
SMALL_GRID = "S!G\n...\n"
SMALL_GRID_HORIZON = 6
SLIP_PROB = 0.2
NORMALIZATION_BOUND = 1e-12
DENSE_L1_BOUND = 0.02
DENSE_MIN_VISITS = 100
# L1 error times sqrt(visits) on rows averaging hazard outcomes
DENSE_SCALED_L1_BOUND = 8.0
SAMPLED_L1_BOUND = 0.05
SAMPLED_MIN_VISITS = 10_000
SAMPLED_ALPHA_F = 0.5
KEEP_K = 8
# two-sided p-value of a 3 sigma deviation
KEEP_P_BOUND = float(2.0 * norm.sf(3.0))


@dataclass(frozen=True)
class CheckResult:
    """One assertion of the suite.

    ``relation`` is ``"<="`` when ``measured`` must not exceed ``bound`` and
    ``">="`` or ``">"`` when it must reach it.
    """

    name: str
    measured: float
    bound: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        if self.relation == "<=":
            return self.measured <= self.bound
        if self.relation == ">=":
            return self.measured >= self.bound
        return self.measured > self.bound

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name}: measured={self.measured:.6g} "
            f"bound{self.relation}{self.bound:.6g} {verdict}"
        )


@dataclass
class VerificationReport:
    """Ordered collection of check results."""

    checks: list[CheckResult] = field(default_factory=list)

    def add(self, check: CheckResult) -> None:
        self.checks.append(check)
        if not check.passed:
            get_logger().warning(f"Check failed: {check.line()}")

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def to_text(self) -> str:
        return "".join(f"{check.line()}\n" for check in self.checks)

    def to_table(self) -> Table:
        table = create_table(
            title="Verification suite",
            columns=["Check", "Measured", "Bound", "Verdict"],
        )
        for check in self.checks:
            table.add_row(
                check.name,
                f"{check.measured:.6g}",
                f"{check.relation} {check.bound:.6g}",
                style_verdict(check.passed),
            )
        return table


def suite_mdps() -> dict[str, MultiGoalMdp]:
    """Small enumerable MDPs every exact check runs on."""
    gamma = 0.825
    return {
        "hazard_chain": build_hazard_chain(SMALL_HORIZON, gamma),
        "slip_chain": build_chain(5, SMALL_HORIZON, gamma, slip_prob=SLIP_PROB),
        "small_grid": build_risky_gridworld(
            parse_grid_map(SMALL_GRID, 0.75), SMALL_GRID_HORIZON, gamma
        ),
    }


def optimal_policy(mdp: MultiGoalMdp) -> PolicyTable:
    return value_iteration(mdp).policy_table(mdp.num_goals)


def _episode_trajectory(
    mdp: MultiGoalMdp, batch: RolloutBatch, index: int, episode: int
) -> Trajectory:
    g_p = int(batch.goals[index])
    trajectory = Trajectory(g_p=g_p, episode_id=episode)
    for step in range(int(batch.lengths[index])):
        s_next = int(batch.states[index, step + 1])
        trajectory.append(
            Transition(
                s=int(batch.states[index, step]),
                a=int(batch.actions[index, step]),
                s_next=s_next,
                g_p=g_p,
                t_remaining=mdp.horizon - step,
                episode_id=episode,
                step_index=step,
                achieved_goal=int(mdp.goal_map[s_next]),
                terminal=bool(mdp.terminal[s_next]),
            )
        )
    return trajectory


def _policy_trajectories(
    mdp: MultiGoalMdp,
    policy: PolicyTable,
    goals: np.ndarray,
    rng: Rng,
    chunk: int = 512,
) -> Iterator[Trajectory]:
    """Endless stream of trajectories of ``policy`` pursuing ``goals`` uniformly."""
    episode = 0
    while True:
        starts = rng.categorical_rows(
            np.broadcast_to(mdp.start_distribution, (chunk, mdp.num_states))
        )
        picked = goals[np.floor(rng.random(chunk) * goals.size).astype(np.int64)]
        batch = rollout(mdp, policy, chunk, rng, starts=starts, goals=picked)
        for i in range(chunk):
            yield _episode_trajectory(mdp, batch, i, episode)
            episode += 1


@dataclass(frozen=True)
class DenseConvergence:
    """Dense-update errors split by whether the pursued route is deterministic.

    Rows on a deterministic route converge to the exact density, so their plain
    L1 error is held to a fixed bound. Rows pursuing a goal whose route meets a
    hazard average sampled outcomes, so their error is scaled by ``sqrt(n)``.
    """

    deterministic_l1: float
    deterministic_keys: int
    stochastic_scaled_l1: float
    stochastic_keys: int


def _l1_errors(
    table: FTable,
    visits: Counter,
    exact: dict[int, ExactF],
    goals: np.ndarray,
    min_visits: int,
) -> list[tuple[float, int]]:
    """``(L1 error, visits)`` for each key pursuing one of ``goals``."""
    wanted = set(goals.tolist())
    errors = []
    for key, count in visits.items():
        s, a, g_p, t_remaining = key
        if count < min_visits or g_p not in wanted:
            continue
        reference = exact[g_p].densities[t_remaining, s, a]
        errors.append((float(np.abs(table.row(*key) - reference).sum()), count))
    return errors


def check_dense_convergence(updates: int, rng: Rng) -> DenseConvergence:
    """Dense density updates along oracle-policy episodes on the bundled risky map.

    Episodes pursue every policy goal, the start cell's included. The step size
    is ``1 / n`` per key and each episode is replayed back to front. Goals whose
    optimal route enters a hazard or the fail state are reported apart.

    Returns:
        Errors over keys visited at least ``DENSE_MIN_VISITS`` times
    """
    mdp = build_risky_gridworld(load_grid_map(default_map_path(), 0.75), 30, 0.825)
    policy = optimal_policy(mdp)
    start = int(np.argmax(mdp.start_distribution))
    goals = mdp.policy_goals
    route = rollout(
        mdp,
        policy,
        goals.size,
        Rng(0),
        starts=np.full(goals.size, start),
        goals=goals,
    )
    # both outcomes of entering a hazard are flagged
    risky = mdp.flags["hazard"] | mdp.terminal
    stochastic = risky[route.states].any(axis=1)
    exact = {int(g): exact_successor_density(mdp, policy, int(g)) for g in goals}

    table = FTable(mdp.num_goals)
    visits: Counter = Counter()
    done = 0
    for trajectory in _policy_trajectories(mdp, policy, goals, rng):
        for transition in reversed(trajectory.transitions):
            key = (transition.s, transition.a, transition.g_p, transition.t_remaining)
            visits[key] += 1
            f_update_dense(table, transition, policy, 1.0 / visits[key])
            done += 1
        if done >= updates:
            break

    deterministic = _l1_errors(table, visits, exact, goals[~stochastic], DENSE_MIN_VISITS)
    sampled = _l1_errors(table, visits, exact, goals[stochastic], DENSE_MIN_VISITS)
    return DenseConvergence(
        deterministic_l1=max((error for error, _ in deterministic), default=0.0),
        deterministic_keys=len(deterministic),
        stochastic_scaled_l1=max(
            (error * np.sqrt(count) for error, count in sampled), default=0.0
        ),
        stochastic_keys=len(sampled),
    )


def check_sampled_convergence(updates: int, rng: Rng) -> tuple[float, int]:
    """Sampled density updates on the slip chain against the exact fixed point.

    Each replayed step draws a HER goal from its own episode and a uniform goal,
    exactly as training does, with a ``1 / n`` step per key.

    Returns:
        Largest L1 error over keys visited at least ``SAMPLED_MIN_VISITS`` times,
        and how many keys were compared
    """
    mdp = suite_mdps()["slip_chain"]
    policy = PolicyTable.constant(mdp.num_states, mdp.num_goals, 0)
    goals = mdp.policy_goals
    exact = {int(g): exact_successor_density(mdp, policy, int(g)) for g in goals}

    table = FTable(mdp.num_goals)
    visits: Counter = Counter()
    done = 0
    for trajectory in _policy_trajectories(mdp, policy, goals, rng):
        for offset in reversed(range(len(trajectory))):
            transition = trajectory.transitions[offset]
            key = (transition.s, transition.a, transition.g_p, transition.t_remaining)
            visits[key] += 1
            goal = relabel_her(trajectory, offset, KEEP_K, rng)
            alt_goal = sample_uniform_goal(mdp.num_goals, rng)
            f_update_sampled(
                table,
                transition,
                goal,
                alt_goal,
                policy,
                1.0 / visits[key],
                SAMPLED_ALPHA_F,
                KEEP_K,
            )
            done += 1
        if done >= updates:
            break
    errors = _l1_errors(table, visits, exact, goals, SAMPLED_MIN_VISITS)
    return max((error for error, _ in errors), default=0.0), len(errors)


def keep_probability_pvalue(draws: int, k: int, rng: Rng) -> float:
    """Two-sided binomial p-value of the observed kept-goal frequency vs ``1 / (k + 1)``."""
    step = Transition(0, 0, 1, 2, 1, 0, 0, 1)
    trajectory = Trajectory(g_p=2, transitions=[step])
    kept = sum(relabel_her(trajectory, 0, k, rng).g_r == 2 for _ in range(draws))
    return float(binomtest(kept, draws, 1.0 / (k + 1)).pvalue)


def clip_violations() -> int:
    """Count idempotence and monotonicity failures of ``clip_ratio`` on a grid."""
    weights = np.concatenate([np.linspace(0.0, 20.0, 401), [1e-9, 1e9]])
    weights.sort()
    violations = 0
    for c in (0.01, 0.3, 1.0, 10.0):
        clipped = [clip_ratio(float(w), c) for w in weights]
        violations += sum(clip_ratio(v, c) != v for v in clipped)
        violations += sum(b < a for a, b in zip(clipped, clipped[1:]))
        violations += sum(not 1.0 / (1.0 + c) <= v <= 1.0 + c for v in clipped)
    return violations


def unit_alpha_deviation(rng: Rng) -> float:
    """Largest ``|W - 1|`` at ``alpha = 1`` over random densities, zeros included."""
    f = np.asarray(rng.random(1000))
    h = np.asarray(rng.random(1000))
    f[:10] = 0.0
    return float(np.abs(importance_weights(f, h, 1.0) - 1.0).max())


def diagonal_ratio_gap(mdp: MultiGoalMdp, policy: PolicyTable) -> float:
    """Largest ``|h(g_p | s', T) / f(g_p | s, a, T) - 1|`` over reachable ``s'``.

    In a discrete goal space the pursued goal is itself drawn in hindsight with
    positive probability, so this ratio differs from 1 and HER stays biased on
    the diagonal.
    """
    gap = 0.0
    for g_p in mdp.policy_goals:
        exact = exact_successor_density(mdp, policy, int(g_p))
        for t in range(1, exact.t_max + 1):
            f = exact.densities[t][:, :, g_p]
            h = exact.successors[t][:, g_p]
            reachable = (mdp.transition > 0.0) & (f[:, :, None] > 0.0)
            ratio = h[None, None, :] / np.where(f > 0.0, f, 1.0)[:, :, None]
            gap = max(gap, float(np.abs(np.where(reachable, ratio - 1.0, 0.0)).max()))
    return gap


def run_verification_suite(
    config: Optional[VerifyConfig] = None,
    weight_fn: WeightFn = importance_weights,
    show_progress: bool = False,
) -> VerificationReport:
    """Run every oracle check and collect the results.

    Args:
        config: Sample sizes and seed; defaults to ``VerifyConfig()``
        weight_fn: Importance-weight formula under test
        show_progress: Display a rich progress bar

    Returns:
        VerificationReport with one entry per assertion
    """
    config = config or VerifyConfig()
    logger = get_logger()
    report = VerificationReport()
    mdps = suite_mdps()
    policies = {name: optimal_policy(mdp) for name, mdp in mdps.items()}
    ratio_rng, keep_rng, dense_rng, sampled_rng, alpha_rng = Rng(config.seed).spawn(5)

    def exact_checks() -> None:
        for name, mdp in mdps.items():
            policy = policies[name]
            exact_q = value_iteration(mdp)
            report.add(
                CheckResult(
                    f"bellman_residual[{name}]",
                    bellman_residual(mdp, exact_q),
                    IDENTITY_TOLERANCE,
                )
            )
            normalization = 0.0
            recursion = 0.0
            for g_p in mdp.policy_goals:
                exact = exact_successor_density(mdp, policy, int(g_p))
                normalization = max(normalization, exact.normalization_error())
                recursion = max(recursion, recursion_residual(mdp, policy, exact))
            report.add(
                CheckResult(
                    f"density_normalization[{name}]", normalization, NORMALIZATION_BOUND
                )
            )
            report.add(CheckResult(f"density_recursion[{name}]", recursion, NORMALIZATION_BOUND))

    def mixture_checks() -> None:
        for name, mdp in mdps.items():
            for alpha in config.alphas:
                result = verify_mixture_identity(
                    mdp, policies[name], alpha, weight_fn=weight_fn
                )
                report.add(
                    CheckResult(
                        f"mixture_identity[{name},alpha={alpha:g}]",
                        result.max_discrepancy,
                        IDENTITY_TOLERANCE,
                    )
                )

    def ratio_checks() -> None:
        hazard = mdps["hazard_chain"]
        policy = policies["hazard_chain"]
        result = verify_bias_ratio(hazard, policy, config.trajectories, ratio_rng)
        report.add(
            CheckResult("bias_ratio_max_z[hazard_chain]", result.max_z, result.z_threshold)
        )
        report.add(
            CheckResult(
                "bias_ratio_impossible_outcomes[hazard_chain]",
                result.impossible_outcomes,
                0,
            )
        )
        report.add(
            CheckResult("bias_ratio_bins_checked[hazard_chain]", result.bins_checked, 1, ">=")
        )
        report.add(
            CheckResult(
                "hindsight_suppression[hazard_chain]", result.hindsight_suppression, 0.0, ">"
            )
        )
        report.add(
            CheckResult(
                "diagonal_hindsight_ratio_gap[hazard_chain]",
                diagonal_ratio_gap(hazard, policy),
                0.0,
                ">",
            )
        )

    def weight_checks() -> None:
        report.add(CheckResult("clip_ratio_violations", clip_violations(), 0))
        report.add(
            CheckResult(
                "unit_alpha_weight_deviation", unit_alpha_deviation(alpha_rng), 1e-12
            )
        )
        report.add(
            CheckResult(
                f"keep_probability_pvalue[k={KEEP_K}]",
                keep_probability_pvalue(config.keep_draws, KEEP_K, keep_rng),
                KEEP_P_BOUND,
                ">=",
            )
        )

    def density_checks() -> None:
        dense = check_dense_convergence(config.density_updates, dense_rng)
        report.add(
            CheckResult(
                "dense_density_l1[risky_gridworld]", dense.deterministic_l1, DENSE_L1_BOUND
            )
        )
        report.add(CheckResult("dense_density_keys_compared", dense.deterministic_keys, 1, ">="))
        report.add(
            CheckResult(
                "dense_density_scaled_l1[hazard_routes]",
                dense.stochastic_scaled_l1,
                DENSE_SCALED_L1_BOUND,
            )
        )
        report.add(
            CheckResult("dense_density_hazard_keys_compared", dense.stochastic_keys, 1, ">=")
        )
        sampled_l1, sampled_keys = check_sampled_convergence(
            config.sampled_density_updates, sampled_rng
        )
        report.add(CheckResult("sampled_density_l1[slip_chain]", sampled_l1, SAMPLED_L1_BOUND))
        report.add(CheckResult("sampled_density_keys_compared", sampled_keys, 1, ">="))

    stages: list[tuple[str, Callable[[], None]]] = [
        ("Exact DP references", exact_checks),
        ("Mixture identity", mixture_checks),
        ("Bias ratio", ratio_checks),
        ("Weights and relabeling", weight_checks),
        ("Density convergence", density_checks),
    ]
    with track_progress("Verifying", total=len(stages), enabled=show_progress) as tracker:
        for description, stage in stages:
            logger.debug(f"Running {description.lower()} checks")
            stage()
            tracker.advance(description=description)
    return report
