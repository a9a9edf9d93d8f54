"""Episode loop shared by all learners.

Each run draws two independent streams from its seed: one drives behaviour and
replay, the other the periodic greedy evaluations, so changing the evaluation
cadence never changes what the learner sees.
"""

import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from ..core.mdp import MultiGoalMdp
from ..core.rng import Rng
from ..core.rollout import rollout
from ..envs.registry import build_environment
from ..learning.agents import Learner, learning_rate, make_learner
from ..learning.replay import Trajectory, Transition
from ..oracle.evaluation import EvaluationResult, bias_from_rollouts, summarize_rollouts
from ..types import ExperimentConfig
from ..ui.progress import track_progress
from ..utils.logger import get_logger
from .config import config_hash
from .metrics import MetricsRow, RunMetrics, write_metrics


@dataclass
class TrainingOutcome:
    """Everything a finished run leaves behind."""

    metrics: RunMetrics
    learner: Learner
    mdp: MultiGoalMdp
    last_evaluation: Optional[EvaluationResult] = None


def run_episode(
    mdp: MultiGoalMdp,
    learner: Learner,
    episode: int,
    lr: float,
    rng: Rng,
    exploring_starts: bool = False,
) -> Trajectory:
    """Roll out the behaviour policy for one episode and feed the learner.

    The episode stops at the horizon or as soon as the pursued goal is achieved
    or a terminal state is entered. With ``exploring_starts`` the episode starts
    in a uniform non-terminal state and its first action is uniform.
    """
    if exploring_starts:
        s = mdp.sample_exploring_start(rng)
    else:
        s = mdp.sample_start(rng)
    g_p = mdp.sample_policy_goal(rng)
    trajectory = Trajectory(g_p=g_p, episode_id=episode)
    for step in range(mdp.horizon):
        t_remaining = mdp.horizon - step
        if exploring_starts and step == 0:
            a = rng.integers(mdp.num_actions)
        else:
            a = learner.act(s, g_p, t_remaining, rng)
        s_next = mdp.sample_step(s, a, rng)
        transition = Transition(
            s=s,
            a=a,
            s_next=s_next,
            g_p=g_p,
            t_remaining=t_remaining,
            episode_id=episode,
            step_index=step,
            achieved_goal=int(mdp.goal_map[s_next]),
            terminal=bool(mdp.terminal[s_next]),
        )
        trajectory.append(transition)
        if transition.done:
            break
        s = s_next
    learner.end_episode(trajectory, lr, rng, episode)
    return trajectory


def evaluate_learner(
    mdp: MultiGoalMdp, learner: Learner, n_episodes: int, rng: Rng
) -> tuple[EvaluationResult, float, float]:
    """Greedy success/return plus start-state bias and its CI half-width."""
    batch = rollout(mdp, learner.policy_table(), n_episodes, rng)
    evaluation = summarize_rollouts(mdp, batch)
    bias = bias_from_rollouts(learner.start_values(), batch)
    return evaluation, bias.bias, bias.ci_half_width


def train(config: ExperimentConfig, show_progress: bool = False) -> TrainingOutcome:
    """Train one learner as described by ``config``.

    Args:
        config: Validated experiment
        show_progress: Display a rich progress bar

    Returns:
        TrainingOutcome with the metrics rows and the trained learner
    """
    logger = get_logger()
    mdp = build_environment(config.env)
    learner = make_learner(config.agent.kind, mdp, config.learner_config())
    metrics = RunMetrics(
        agent=config.agent.kind.value,
        env=config.env.kind.value,
        seed=config.train.seed,
        config_hash=config_hash(config),
    )
    train_rng, eval_rng = Rng(config.train.seed).spawn(2)
    episodes = config.train.episodes
    interval = config.train.eval_interval
    last_evaluation: Optional[EvaluationResult] = None
    started = time.perf_counter()

    with track_progress(
        f"Training {metrics.agent} on {metrics.env}", total=episodes, enabled=show_progress
    ) as tracker:
        for episode in range(episodes):
            lr = learning_rate(learner.config, episode)
            run_episode(
                mdp, learner, episode, lr, train_rng, config.train.exploring_starts
            )
            tracker.advance()
            done = episode + 1
            if done % interval and done != episodes:
                continue
            last_evaluation, bias, ci = evaluate_learner(
                mdp, learner, config.train.eval_episodes, eval_rng
            )
            elapsed = (time.perf_counter() - started) * 1000.0
            row = MetricsRow(
                episode=done,
                success_rate=last_evaluation.success_rate,
                avg_return=last_evaluation.mean_return,
                bias_start=bias,
                bias_ci=ci,
                wallclock_ms=elapsed if config.train.record_wallclock else 0.0,
            )
            metrics.append(row)
            logger.debug(
                f"episode {done}: success {row.success_rate:.3f}, "
                f"return {row.avg_return:.4f}, bias {row.bias_start:+.4f} ± {row.bias_ci:.4f}"
            )

    return TrainingOutcome(
        metrics=metrics, learner=learner, mdp=mdp, last_evaluation=last_evaluation
    )


def run_training(
    config: ExperimentConfig, write_csv: bool = True, show_progress: bool = False
) -> RunMetrics:
    """Train, then write the metrics CSV to ``config.csv_path()``.

    Args:
        config: Validated experiment
        write_csv: Persist the metrics file
        show_progress: Display a rich progress bar

    Returns:
        The run's RunMetrics
    """
    outcome = train(config, show_progress=show_progress)
    if write_csv:
        write_metrics(outcome.metrics, config.csv_path())
        get_logger().debug(f"Wrote {config.csv_path()}")
    return outcome.metrics


def seed_config(config: ExperimentConfig, seed: int, several: bool) -> ExperimentConfig:
    """Copy of ``config`` for one seed of a multi-seed launch.

    An explicit ``csv_name`` gets a ``_seed<n>`` suffix when several seeds share it.
    """
    train_section = config.train.model_copy(update={"seed": seed})
    output = config.output
    if several and output.csv_name:
        stem, dot, suffix = output.csv_name.rpartition(".")
        name = f"{stem}_seed{seed}.{suffix}" if dot else f"{output.csv_name}_seed{seed}"
        output = output.model_copy(update={"csv_name": name})
    return config.model_copy(update={"train": train_section, "output": output})


def _train_seed(config: ExperimentConfig) -> RunMetrics:
    return run_training(config)


def run_seeds(
    config: ExperimentConfig, seeds: Sequence[int], workers: int = 1
) -> list[RunMetrics]:
    """Train one isolated run per seed, in worker processes when ``workers > 1``.

    Results come back in ``seeds`` order and do not depend on ``workers``.
    """
    configs = [seed_config(config, seed, len(seeds) > 1) for seed in seeds]
    if workers <= 1 or len(configs) <= 1:
        return [run_training(c, show_progress=len(configs) == 1) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_train_seed, configs))
