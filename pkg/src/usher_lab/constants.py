"""Constants used throughout the usher-lab application."""

# Version information
APP_NAME = "usher-lab"
APP_DESCRIPTION = (
    "Tabular multi-goal RL laboratory for hindsight relabeling and its "
    "importance-sampling correction"
)
LOGGER_NAME = "usher-lab"

# CLI exit codes
EXIT_SUCCESS = 0
EXIT_CONFIG_ERROR = 1
EXIT_VERIFICATION_FAILURE = 2
EXIT_INTERRUPTED = 130

# Numerical tolerances
ROW_SUM_TOLERANCE = 1e-9
DENSITY_ROW_TOLERANCE = 1e-6
IDENTITY_TOLERANCE = 1e-9

# Learner defaults
DEFAULT_GAMMA = 0.825
DEFAULT_HORIZON = 30
DEFAULT_K = 8
DEFAULT_ALPHA_Q = 0.01
DEFAULT_ALPHA_F = 0.5
DEFAULT_CLIP = 0.3
DEFAULT_LR0 = 0.01
DEFAULT_LR_DECAY = 0.75
DEFAULT_EPSILON = 0.2
DEFAULT_BATCH_SIZE = 64

# Environment defaults
DEFAULT_HAZARD_STOP_PROB = 0.75
DEFAULT_CRASH_PROB = 0.75
DEFAULT_PHASE_LENGTHS = (1, 1, 4)

# Harness defaults
DEFAULT_EVAL_INTERVAL = 10
DEFAULT_EVAL_EPISODES = 200
MIN_BIN_VISITS = 100

# Metrics CSV layout
METRICS_COLUMNS = (
    "episode",
    "success_rate",
    "avg_return",
    "bias_start",
    "bias_ci",
    "wallclock_ms",
)
COMPARE_COLUMNS = (
    "source",
    "agent",
    "env",
    "seed",
    "config_hash",
    "episode",
    "metric",
    "value",
)
