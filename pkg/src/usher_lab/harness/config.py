"""Experiment file loading, validation, overrides and hashing."""

import hashlib
import json
from importlib.resources import files
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import ValidationError

from ..envs.gridmap import default_map_path
from ..exceptions import ConfigurationError, FileOperationError
from ..types import AgentKind, EnvKind, ExperimentConfig
from ..utils.fs import read_text_file
from ..utils.logger import get_logger

# Fields that influence the built MDP, per environment kind.
_ENV_FIELDS: dict[EnvKind, tuple[str, ...]] = {
    EnvKind.RISKY_GRIDWORLD: ("hazard_stop_prob", "policy_goals"),
    EnvKind.RED_LIGHT: (
        "road_length",
        "intersection_cell",
        "phase_lengths",
        "crash_prob",
        "random_initial_phase",
    ),
    EnvKind.TORUS_FREEZE: ("dims", "cells_per_dim", "random_start"),
    EnvKind.HAZARD_CHAIN: ("hazard_stop_prob",),
    EnvKind.CHAIN: ("chain_length", "slip_prob"),
}

# Fields each learner actually reads.
_BASE_FIELDS = (
    "lr0",
    "lr_decay",
    "epsilon",
    "t_conditioned_q",
    "batch_size",
    "updates_per_episode",
    "buffer_capacity",
)
_AGENT_FIELDS: dict[AgentKind, tuple[str, ...]] = {
    AgentKind.QLEARNING: _BASE_FIELDS,
    AgentKind.HER: _BASE_FIELDS + ("k",),
    AgentKind.USHER: _BASE_FIELDS
    + ("k", "alpha_q", "alpha_f", "clip", "f_update", "target_interval", "goal_rate_correction"),
}


def get_configs_directory() -> Path:
    """Directory of the experiment files shipped with the package."""
    return Path(str(files("usher_lab") / "configs"))


def list_bundled_configs() -> list[str]:
    """Names (without ``.yaml``) of the bundled experiment files."""
    return sorted(path.stem for path in get_configs_directory().glob("*.yaml"))


def resolve_config_path(name_or_path: str) -> Path:
    """Accept either a file path or the name of a bundled experiment.

    Raises:
        ConfigurationError: If neither exists
    """
    candidate = Path(name_or_path)
    if candidate.is_file():
        return candidate
    bundled = get_configs_directory() / f"{name_or_path}.yaml"
    if bundled.is_file():
        return bundled
    available = ", ".join(list_bundled_configs())
    raise ConfigurationError(
        f"no experiment file or bundled config named '{name_or_path}' (bundled: {available})"
    )


def format_validation_error(exc: ValidationError) -> str:
    """Render pydantic errors as ``section.field: message`` lines."""
    lines = []
    for err in exc.errors():
        location = ".".join(str(part) for part in err["loc"]) or "<root>"
        lines.append(f"{location}: {err['msg']}")
    return "\n".join(lines)


def parse_config(data: Any, base_dir: Optional[Path] = None) -> ExperimentConfig:
    """Validate a parsed mapping and resolve the map path.

    Args:
        data: Parsed YAML document; ``None`` means all defaults
        base_dir: Directory relative ``map_path`` values resolve against

    Returns:
        Validated ExperimentConfig with an absolute ``map_path`` when one is set

    Raises:
        ConfigurationError: If validation fails or the map file does not exist
    """
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError("experiment file must contain a mapping of sections")
    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid experiment file:\n{format_validation_error(e)}") from e

    map_path = config.env.map_path
    if map_path is not None:
        if not map_path.is_absolute() and base_dir is not None:
            map_path = (base_dir / map_path).resolve()
        if not map_path.is_file():
            raise ConfigurationError(f"env.map_path: file not found: {map_path}")
        config = config.model_copy(
            update={"env": config.env.model_copy(update={"map_path": map_path})}
        )
    return config


def load_config(path: Path) -> ExperimentConfig:
    """Read and validate a YAML experiment file.

    Raises:
        ConfigurationError: If the file is unreadable, malformed or invalid
    """
    try:
        text = read_text_file(path)
    except FileOperationError as e:
        raise ConfigurationError(str(e)) from e
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigurationError(f"cannot parse {path}: {e}") from e
    config = parse_config(data, base_dir=path.parent)
    get_logger().debug(f"Loaded experiment file {path}")
    return config


def apply_overrides(
    config: ExperimentConfig,
    seed: Optional[int] = None,
    out_dir: Optional[Path] = None,
) -> ExperimentConfig:
    """Return a copy with the CLI's seed and output-directory overrides applied."""
    updates: dict[str, Any] = {}
    if seed is not None:
        if not 0 <= seed < 2**64:
            raise ConfigurationError("seed must lie in [0, 2**64)")
        updates["train"] = config.train.model_copy(update={"seed": seed})
    if out_dir is not None:
        updates["output"] = config.output.model_copy(update={"directory": out_dir})
    return config.model_copy(update=updates) if updates else config


def _env_payload(config: ExperimentConfig) -> dict[str, Any]:
    env = config.env
    payload: dict[str, Any] = {
        "kind": env.kind.value,
        "horizon": env.horizon,
        "gamma": env.gamma,
    }
    dumped = env.model_dump(mode="json")
    for name in _ENV_FIELDS[env.kind]:
        payload[name] = dumped[name]
    if env.kind is EnvKind.RISKY_GRIDWORLD:
        # the map's content matters, not where it lives
        if env.map_text is not None:
            payload["map"] = env.map_text
        else:
            payload["map"] = read_text_file(env.map_path or default_map_path())
    return payload


def config_hash(config: ExperimentConfig) -> str:
    """Stable sha256 of every field that affects a run's results.

    Output settings, parameters the chosen environment or learner ignores, and
    the location of the map file do not contribute.
    """
    agent = config.agent.model_dump(mode="json")
    payload = {
        "env": _env_payload(config),
        "agent": {"kind": agent["kind"]}
        | {name: agent[name] for name in _AGENT_FIELDS[config.agent.kind]},
        "train": config.train.model_dump(mode="json"),
    }
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
