# crweier/settings.py
"""Environment-backed defaults. CLI flags override these values."""
from __future__ import annotations

import os

from dotenv import load_dotenv

load_dotenv()

# ── Configuration ────────────────────────────────────────────────────

DEFAULT_POINTS = int(os.getenv("CRWEIER_POINTS", "200"))
DEFAULT_SEED = int(os.getenv("CRWEIER_SEED", "0"))
DEFAULT_ORDER = int(os.getenv("CRWEIER_ORDER", "5"))
FRAME_TOL = float(os.getenv("CRWEIER_FRAME_TOL", "1e-9"))
SAMPLE_MARGIN = float(os.getenv("CRWEIER_MARGIN", "0.05"))
VERBOSITY = int(os.getenv("CRWEIER_VERBOSITY", "0"))
CHART_DIR = os.getenv("CRWEIER_CHART_DIR", "./data/charts")

MAX_ORDER = 8
DIV_EPSILON = 1e-12
CONDITION_LIMIT = 1e12

# Default pass/fail tolerances per suite.
SUITE_TOLERANCES = {
    "frame": 1e-8,
    "complex": 1e-8,
    "weierstrass": 1e-8,
    "pluriharmonic": 1e-8,
    "harmonicity": 1e-6,
    "classify": 1e-6,
}

# Smallest jet order each suite can evaluate.
SUITE_MIN_ORDER = {
    "frame": 3,
    "complex": 4,
    "weierstrass": 3,
    "pluriharmonic": 3,
    "harmonicity": 3,
    "classify": 5,
}

SUITES = tuple(SUITE_TOLERANCES)
