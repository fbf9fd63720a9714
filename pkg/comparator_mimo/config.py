import os
from pathlib import Path

# ROOT DATA FOLDER
DATA_FOLDER = os.getenv("COMPARATOR_MIMO_DATA", "./data")

# PRESET SCENARIO FILES
SCENARIOS_FOLDER = os.getenv(
    "COMPARATOR_MIMO_SCENARIOS", str(Path(__file__).resolve().parent.parent / "scenarios")
)

# SWEEP RESULTS FOLDER (created on demand by the CLI)
RESULTS_FOLDER = f"{DATA_FOLDER}/results"

# LOGGING
LOG_LEVEL = os.getenv("COMPARATOR_MIMO_LOG_LEVEL", "INFO").upper()

# WORKER THREADS FOR MONTE CARLO TRIALS
DEFAULT_THREADS = int(os.getenv("COMPARATOR_MIMO_THREADS", "1"))

# DESK-SCALE TRIAL COUNTS
DESK_CHANNELS = 300
DESK_NOISE = 50

# PUBLISHED TRIAL COUNTS, keyed by metric: (channels, noise draws)
PUBLISHED_SCALE = {
    "ber": (4000, 100),
    "mse": (4000, 100),
    "symbol_mse": (4000, 100),
    "sum_rate": (2000, 2000),
    "power": (1, 1),
}

# NUMERICS
JITTER_SCALE = 1e-10
GAMMA_EXACT_LIMIT = 65536
GAMMA_DEFAULT_SAMPLES = 100_000
MAX_SKIP_FRACTION = 0.01
DEFAULT_REFERENCE_DISTANCE = 10.0
DEFAULT_CELL_RADIUS = 500.0
DEFAULT_PATH_LOSS_EXPONENT = 3.0
