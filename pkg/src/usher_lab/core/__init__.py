"""Enumerable multi-goal MDP core: environments, randomness and rollouts."""

from .mdp import MultiGoalMdp
from .rng import Rng
from .rollout import PolicyTable, RolloutBatch, rollout, sample_starts_and_goals

__all__ = [
    "MultiGoalMdp",
    "PolicyTable",
    "Rng",
    "RolloutBatch",
    "rollout",
    "sample_starts_and_goals",
]
