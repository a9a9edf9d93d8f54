"""Replay, successor densities, importance weights and the tabular learners."""

from .agents import (
    HerLearner,
    Learner,
    QLearningLearner,
    UsherLearner,
    behavior_action,
    compute_w,
    greedy_action,
    greedy_policy,
    her_update,
    learning_rate,
    make_learner,
    q_update_vanilla,
    usher_update,
)
from .density import FTable, f_update_dense, f_update_sampled
from .qtable import QTable
from .replay import (
    BatchItem,
    GoalSample,
    GoalSource,
    ReplayBuffer,
    Trajectory,
    Transition,
    relabel_her,
    sample_batch,
    sample_uniform_goal,
)
from .weights import clip_ratio, importance_weight, importance_weights

__all__ = [
    "BatchItem",
    "FTable",
    "GoalSample",
    "GoalSource",
    "HerLearner",
    "Learner",
    "QLearningLearner",
    "QTable",
    "ReplayBuffer",
    "Trajectory",
    "Transition",
    "UsherLearner",
    "behavior_action",
    "clip_ratio",
    "compute_w",
    "f_update_dense",
    "f_update_sampled",
    "greedy_action",
    "greedy_policy",
    "her_update",
    "importance_weight",
    "importance_weights",
    "learning_rate",
    "make_learner",
    "q_update_vanilla",
    "relabel_her",
    "sample_batch",
    "sample_uniform_goal",
    "usher_update",
]
