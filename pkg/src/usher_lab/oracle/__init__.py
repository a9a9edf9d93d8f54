"""Exact references and statistical checks."""

from .dp import (
    ExactF,
    ExactQ,
    bellman_residual,
    exact_successor_density,
    recursion_residual,
    value_iteration,
)
from .evaluation import (
    BiasReport,
    EvaluationResult,
    bias_estimate,
    bias_from_rollouts,
    evaluate_policy,
    summarize_rollouts,
)
from .verifiers import (
    BiasRatioReport,
    MixtureReport,
    default_test_functions,
    familywise_threshold,
    verify_bias_ratio,
    verify_mixture_identity,
)

__all__ = [
    "BiasRatioReport",
    "BiasReport",
    "EvaluationResult",
    "ExactF",
    "ExactQ",
    "MixtureReport",
    "bellman_residual",
    "bias_estimate",
    "bias_from_rollouts",
    "default_test_functions",
    "evaluate_policy",
    "exact_successor_density",
    "familywise_threshold",
    "verify_bias_ratio",
    "verify_mixture_identity",
    "recursion_residual",
    "summarize_rollouts",
    "value_iteration",
]
