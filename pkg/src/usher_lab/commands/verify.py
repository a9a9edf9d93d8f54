"""Verify command implementation for usher-lab."""

from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import ValidationError

from ..constants import EXIT_CONFIG_ERROR, EXIT_INTERRUPTED, EXIT_VERIFICATION_FAILURE
from ..exceptions import ConfigurationError, UsherLabError
from ..harness.config import format_validation_error
from ..harness.suite import VerificationReport, run_verification_suite
from ..types import VerifyConfig
from ..ui.styles import console
from ..utils.fs import read_text_file, write_text_atomic
from ..utils.logger import error, success
from . import exit_with_error


def load_verify_config(path: Optional[Path], seed: Optional[int] = None) -> VerifyConfig:
    """Read suite settings from YAML (all defaults without a file).

    Raises:
        ConfigurationError: If the file is unreadable or invalid
    """
    data: Any = {}
    if path is not None:
        try:
            data = yaml.safe_load(read_text_file(path)) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"cannot parse {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError("verification file must contain a mapping")
    if seed is not None:
        data = {**data, "seed": seed}
    try:
        return VerifyConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(
            f"invalid verification settings:\n{format_validation_error(e)}"
        ) from e


def show_report(report: VerificationReport) -> None:
    console.print(report.to_table())
    passed = sum(check.passed for check in report.checks)
    if report.passed:
        success(f"All {passed} checks passed")
    else:
        error(f"{len(report.failures)} of {len(report.checks)} checks failed")


def run_verify_command(
    config_path: Optional[Path] = None,
    seed: Optional[int] = None,
    out_dir: Optional[Path] = None,
) -> None:
    """Run the oracle verification suite and exit 2 on any failed check.

    Args:
        config_path: Optional YAML file with VerifyConfig fields
        seed: Override for the suite seed
        out_dir: Directory receiving ``verification.txt``
    """
    try:
        config = load_verify_config(config_path, seed)
        report = run_verification_suite(config, show_progress=True)
        show_report(report)
        if out_dir is not None:
            target = out_dir / "verification.txt"
            write_text_atomic(target, report.to_text())
            success(f"Report written to {target}")
    except UsherLabError as e:
        exit_with_error("Verification Not Run", str(e), EXIT_CONFIG_ERROR)
    except KeyboardInterrupt:
        exit_with_error("Verification Cancelled", "Interrupted by user", EXIT_INTERRUPTED)

    if not report.passed:
        exit_with_error(
            "Verification Failed",
            "\n".join(check.line() for check in report.failures),
            EXIT_VERIFICATION_FAILURE,
        )
