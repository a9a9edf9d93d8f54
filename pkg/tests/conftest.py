"""Pytest configuration and fixtures for usher-lab tests."""

import tempfile
from collections.abc import Generator
from pathlib import Path
from typing import Any

import pytest
import yaml

from usher_lab.core.mdp import MultiGoalMdp
from usher_lab.envs.chains import build_chain, build_hazard_chain
from usher_lab.envs.gridmap import default_map_path, load_grid_map
from usher_lab.envs.gridworld import build_risky_gridworld
from usher_lab.types import PolicyGoals

GAMMA = 0.825


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        yield Path(tmp_dir)


@pytest.fixture
def hazard_mdp() -> MultiGoalMdp:
    """Four-state hazard corridor with horizon 4."""
    return build_hazard_chain(4, GAMMA)


@pytest.fixture
def chain_mdp() -> MultiGoalMdp:
    """Deterministic five-state corridor with horizon 6."""
    return build_chain(5, 6, GAMMA)


@pytest.fixture
def slip_chain_mdp() -> MultiGoalMdp:
    """Five-state corridor whose moves fail with probability 0.2."""
    return build_chain(5, 4, GAMMA, slip_prob=0.2)


@pytest.fixture
def risky_mdp() -> MultiGoalMdp:
    """The bundled risky map, pursuing only the marked goal."""
    grid = load_grid_map(default_map_path(), 0.75)
    return build_risky_gridworld(grid, 30, GAMMA, PolicyGoals.MARKED)


@pytest.fixture
def small_experiment() -> dict[str, Any]:
    """A fast experiment on the deterministic chain."""
    return {
        "env": {"kind": "chain", "chain_length": 4, "horizon": 5, "gamma": 0.9},
        "agent": {"kind": "usher", "lr0": 0.5, "batch_size": 8, "clip": 10.0},
        "train": {"episodes": 20, "seed": 3, "eval_interval": 10, "eval_episodes": 20},
        "output": {"directory": "runs"},
    }


@pytest.fixture
def experiment_file(temp_dir: Path, small_experiment: dict[str, Any]) -> Path:
    """``small_experiment`` written to a YAML file with output inside ``temp_dir``."""
    data = dict(small_experiment)
    data["output"] = {"directory": str(temp_dir / "runs")}
    path = temp_dir / "experiment.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path
