"""
Centralized configuration management for the localizability simulator.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# --- Path Configuration ---
load_dotenv()
BASE_DIR = Path(__file__).resolve().parent.parent
LOGS_DIR = BASE_DIR / "logs"
RESULTS_DIR = BASE_DIR / "results"

# --- Network Generation ---
D0_METERS = float(os.getenv("D0_METERS", "10.0"))
GRID_CELLS = int(os.getenv("GRID_CELLS", "20"))
RADIUS_FACTOR = float(os.getenv("RADIUS_FACTOR", "6.0"))
DEFAULT_DENSITY_N = float(os.getenv("DEFAULT_DENSITY_N", "3.2"))
DEFAULT_BEACON_DENSITY = float(os.getenv("DEFAULT_BEACON_DENSITY", "0.1"))
SKEW_CORNER_FRACTION = float(os.getenv("SKEW_CORNER_FRACTION", "0.8"))
SKEW_MAX_ATTEMPTS = int(os.getenv("SKEW_MAX_ATTEMPTS", "200"))
UNIFORM_MAX_ATTEMPTS = int(os.getenv("UNIFORM_MAX_ATTEMPTS", "100000"))

# --- Geometry ---
COLLINEAR_TOL = float(os.getenv("COLLINEAR_TOL", "1e-9"))

# --- Simulation ---
ROUND_BUDGET_FACTOR = int(os.getenv("ROUND_BUDGET_FACTOR", "10"))
QUIET_ROUNDS = int(os.getenv("QUIET_ROUNDS", "2"))

# --- Protocol & Oracle Limits ---
ITE_MAX_NODES = int(os.getenv("ITE_MAX_NODES", "100"))
ORACLE_MAX_NODES = int(os.getenv("ORACLE_MAX_NODES", "400"))
BRUTE_FORCE_MAX_VERTICES = int(os.getenv("BRUTE_FORCE_MAX_VERTICES", "16"))
WE_MAX_RIM = int(os.getenv("WE_MAX_RIM", "6"))

# --- Reporting ---
# 20 mA / 1000 x 3 V per round-second
ENERGY_COEFFICIENT = float(os.getenv("ENERGY_COEFFICIENT", "0.06"))
SECONDS_PER_ROUND = float(os.getenv("SECONDS_PER_ROUND", "1.0"))
CYCLE_TIMEOUT = int(os.getenv("CYCLE_TIMEOUT", "350"))
DEFAULT_SEEDS = int(os.getenv("DEFAULT_SEEDS", "30"))
SWEEP_WORKERS = int(os.getenv("SWEEP_WORKERS", "1"))
# Density ranges the sweep tables cover
SWEEP_B_RANGE = (0.01, 0.2)
SWEEP_N_RANGE = (2.0, 5.8)

# --- File & Logging Configuration ---
LOG_FILE_PATH = LOGS_DIR / "app.log"
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
LOG_MAX_BYTES = int(os.getenv("LOG_MAX_BYTES", str(5 * 1024 * 1024)))
LOG_BACKUP_COUNT = int(os.getenv("LOG_BACKUP_COUNT", "5"))
NETWORK_FILENAME = "network.json"
TRACE_FILENAME = "trace.json"
REPORT_FILENAME = "run_report.json"
SWEEP_FILENAME = "sweep.csv"
STATE_MAP_FILENAME = "state_map.svg"
