# config.py
# -----------------------------------------------------------------------------
# Centralized defaults and constants for fpimpulse.
# - Environment variables can override runtime knobs (workers, chunking, logs).
# - Model and scenario defaults are the calibrated values of the study setup.
# - JSON run configurations fall back to these values for omitted fields.
# -----------------------------------------------------------------------------

import os
from pathlib import Path

# Paths
PACKAGE_DIR = Path(__file__).resolve().parent.parent
PROJECT_ROOT = PACKAGE_DIR.parent
LOG_CONF = Path(os.environ.get(
    "FPIMPULSE_LOG_CONF",
    str(PROJECT_ROOT / "configuration" / "application" / "logging.conf"),
))
LOG_LEVEL = os.environ.get("FPIMPULSE_LOG_LEVEL")  # None keeps logging.conf level

# Parallelism
WORKERS = int(os.environ.get("FPIMPULSE_WORKERS", str(min(4, os.cpu_count() or 1))))
MC_CHUNK = int(os.environ.get("FPIMPULSE_MC_CHUNK", "16384"))  # paths per PRNG substream

# Growth model (identified from the size histogram)
GROWTH_R = 0.051
D_RELAX = 0.019
SIGMA = 0.051
X0_G = 6.0
Z0 = 0.02

# Monte Carlo
MC_DT = 0.004
MC_SEARCH_PATHS = 100_000
MC_REPORT_PATHS = 1_000_000
OBS_DAY = 90.0
SEED = 20200901

# Histogram input
HIST_OPEN_BIN_OFFSET_G = 5.0  # midpoint offset for the unbounded last bin

# Scenario
W_MAX = 5.3
GRID_N = 201
DT = 0.01
HORIZON = 70.0
IMPULSE_TIMES = tuple(10.0 * j for j in range(1, 7))
CAP_U = 0.2
COST_C = 0.2
WINDOW_FRACTIONS = (0.3, 0.7)
MORTALITY = 0.01
HABITAT_R = (0.048, 0.051)

# Initial hump
HUMP_A = 500.0
HUMP_W = 0.1
HUMP_Z = 0.1
HUMP_TOTAL = 6.0e6

# Solvers
CFL_SAFETY = 0.9
PICARD_MAX_ITERS = 50
RECORD_EVERY = 1.0  # days between conditional-density records
SWEEP_COSTS = tuple(round(0.1 * k, 1) for k in range(1, 11))

# App
VERSION = "1.0.0"
