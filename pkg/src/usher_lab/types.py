"""Type definitions for usher-lab.

Experiment configuration is expressed as pydantic models so that every YAML
file is validated, with readable errors, before any training starts.
"""

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .constants import (
    DEFAULT_ALPHA_F,
    DEFAULT_ALPHA_Q,
    DEFAULT_BATCH_SIZE,
    DEFAULT_CLIP,
    DEFAULT_CRASH_PROB,
    DEFAULT_EPSILON,
    DEFAULT_EVAL_EPISODES,
    DEFAULT_EVAL_INTERVAL,
    DEFAULT_GAMMA,
    DEFAULT_HAZARD_STOP_PROB,
    DEFAULT_HORIZON,
    DEFAULT_K,
    DEFAULT_LR0,
    DEFAULT_LR_DECAY,
    DEFAULT_PHASE_LENGTHS,
)


class EnvKind(str, Enum):
    """Environments the harness can build."""

    RISKY_GRIDWORLD = "risky_gridworld"
    RED_LIGHT = "red_light"
    TORUS_FREEZE = "torus_freeze"
    HAZARD_CHAIN = "hazard_chain"
    CHAIN = "chain"


class AgentKind(str, Enum):
    """Learners the harness can train."""

    QLEARNING = "qlearning"
    HER = "her"
    USHER = "usher"


class FUpdateMode(str, Enum):
    """How the successor-density table is updated."""

    SAMPLED = "sampled"
    DENSE = "dense"


class PolicyGoals(str, Enum):
    """Which gridworld cells may be pursued as policy goals."""

    FREE = "free"
    MARKED = "marked"


class EnvSection(BaseModel):
    """Environment section of an experiment file."""

    model_config = ConfigDict(extra="forbid")

    kind: EnvKind = Field(default=EnvKind.RISKY_GRIDWORLD, description="Environment kind")
    horizon: int = Field(default=DEFAULT_HORIZON, ge=1, description="Episode length")
    gamma: float = Field(default=DEFAULT_GAMMA, ge=0.0, le=1.0, description="Discount")

    # risky_gridworld
    map_path: Optional[Path] = Field(
        default=None, description="Grid map file; the bundled map when both map fields are empty"
    )
    map_text: Optional[str] = Field(default=None, description="Inline grid map")
    hazard_stop_prob: float = Field(default=DEFAULT_HAZARD_STOP_PROB, ge=0.0, le=1.0)
    policy_goals: PolicyGoals = Field(
        default=PolicyGoals.FREE, description="Goals sampled as g_p each episode"
    )

    # red_light
    road_length: int = Field(default=6, ge=2)
    intersection_cell: int = Field(default=3, ge=0)
    phase_lengths: tuple[int, int, int] = Field(default=DEFAULT_PHASE_LENGTHS)
    crash_prob: float = Field(default=DEFAULT_CRASH_PROB, ge=0.0, le=1.0)
    random_initial_phase: bool = True

    # torus_freeze
    dims: int = Field(default=2, ge=1)
    cells_per_dim: int = Field(default=8, ge=2)
    random_start: bool = Field(
        default=False, description="Start anywhere unfrozen instead of at the origin"
    )

    # chain / hazard_chain
    chain_length: int = Field(default=5, ge=2)
    slip_prob: float = Field(default=0.0, ge=0.0, lt=1.0)

    @model_validator(mode="after")
    def check_consistency(self) -> "EnvSection":
        """Cross-field checks that single-field constraints cannot express."""
        if self.map_path is not None and self.map_text is not None:
            raise ValueError("map_path and map_text are mutually exclusive")
        if self.intersection_cell >= self.road_length:
            raise ValueError("intersection_cell must be smaller than road_length")
        if any(length < 1 for length in self.phase_lengths):
            raise ValueError("phase lengths must be at least 1")
        return self


class LearnerParams(BaseModel):
    """Learner hyperparameters shared by the agent section and LearnerConfig."""

    model_config = ConfigDict(extra="forbid")

    k: int = Field(default=DEFAULT_K, ge=1, description="Hindsight relabels per kept goal")
    alpha_q: float = Field(default=DEFAULT_ALPHA_Q, gt=0.0, le=1.0)
    alpha_f: float = Field(default=DEFAULT_ALPHA_F, gt=0.0, le=1.0)
    clip: float = Field(default=DEFAULT_CLIP, gt=0.0, description="Ratio clip c")
    lr0: float = Field(default=DEFAULT_LR0, gt=0.0, le=1.0)
    lr_decay: float = Field(default=DEFAULT_LR_DECAY, ge=0.0)
    epsilon: float = Field(default=DEFAULT_EPSILON, ge=0.0, le=1.0)
    batch_size: int = Field(default=DEFAULT_BATCH_SIZE, ge=1)
    updates_per_episode: int = Field(default=1, ge=0, description="Batches per episode")
    f_update: FUpdateMode = FUpdateMode.SAMPLED
    target_interval: int = Field(default=0, ge=0, description="0 keeps f_target = f")
    t_conditioned_q: bool = False
    goal_rate_correction: bool = True
    buffer_capacity: Optional[int] = Field(default=None, ge=1, description="Episodes kept")


class LearnerConfig(LearnerParams):
    """Complete learner configuration, including the discount."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    gamma: float = Field(default=DEFAULT_GAMMA, ge=0.0, le=1.0)


class AgentSection(LearnerParams):
    """Agent section of an experiment file."""

    kind: AgentKind = Field(default=AgentKind.USHER, description="Learner kind")


class TrainSection(BaseModel):
    """Training loop section of an experiment file."""

    model_config = ConfigDict(extra="forbid")

    episodes: int = Field(default=1000, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    eval_interval: int = Field(default=DEFAULT_EVAL_INTERVAL, ge=1)
    eval_episodes: int = Field(default=DEFAULT_EVAL_EPISODES, ge=1)
    exploring_starts: bool = Field(
        default=False,
        description="Start training episodes in a uniform non-terminal state with a uniform "
        "first action; evaluation keeps the environment's start distribution",
    )
    record_wallclock: bool = Field(
        default=False, description="Write elapsed milliseconds instead of 0"
    )


class OutputSection(BaseModel):
    """Output section of an experiment file."""

    model_config = ConfigDict(extra="forbid")

    directory: Path = Field(default=Path("runs"), description="Output directory")
    csv_name: Optional[str] = Field(
        default=None, description="Metrics file name; derived from agent/env/seed when empty"
    )


class ExperimentConfig(BaseModel):
    """A complete experiment description."""

    model_config = ConfigDict(extra="forbid")

    env: EnvSection = Field(default_factory=EnvSection)
    agent: AgentSection = Field(default_factory=AgentSection)
    train: TrainSection = Field(default_factory=TrainSection)
    output: OutputSection = Field(default_factory=OutputSection)

    def learner_config(self) -> LearnerConfig:
        """Merge the agent section with the environment discount."""
        return LearnerConfig(**self.agent.model_dump(exclude={"kind"}), gamma=self.env.gamma)

    def csv_path(self) -> Path:
        """Path of the metrics CSV this run writes."""
        name = self.output.csv_name or (
            f"{self.agent.kind.value}_{self.env.kind.value}_seed{self.train.seed}.csv"
        )
        return self.output.directory / name


class VerifyConfig(BaseModel):
    """Knobs for the verification suite."""

    model_config = ConfigDict(extra="forbid")

    seed: int = Field(default=0, ge=0, lt=2**64)
    trajectories: int = Field(default=1_000_000, ge=1, description="Bias-ratio Monte-Carlo runs")
    alphas: tuple[float, ...] = (0.01, 0.1, 0.5, 1.0)
    density_updates: int = Field(default=200_000, ge=1)
    sampled_density_updates: int = Field(default=200_000, ge=1)
    keep_draws: int = Field(default=100_000, ge=1)
