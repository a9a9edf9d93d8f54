"""Configuration, training loops, metrics files and the verification suite."""

from .config import apply_overrides, config_hash, load_config, parse_config
from .metrics import (
    MetricsRow,
    RunMetrics,
    compare_metrics,
    format_metrics,
    read_metrics,
    write_metrics,
)
from .suite import CheckResult, VerificationReport, run_verification_suite
from .training import TrainingOutcome, run_seeds, run_training, train

__all__ = [
    "CheckResult",
    "MetricsRow",
    "RunMetrics",
    "TrainingOutcome",
    "VerificationReport",
    "apply_overrides",
    "compare_metrics",
    "config_hash",
    "format_metrics",
    "load_config",
    "parse_config",
    "read_metrics",
    "run_seeds",
    "run_training",
    "run_verification_suite",
    "train",
    "write_metrics",
]
