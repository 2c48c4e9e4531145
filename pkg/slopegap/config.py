"""
config.py — Loads and validates runtime settings.
Every setting is optional; values come from the environment or a .env file
via python-dotenv, and CLI flags override them per invocation.
"""

import os
from dotenv import load_dotenv

# Load .env file into the environment
load_dotenv()


def _positive_int(key: str, default: int) -> int:
    """Fetch an integer env variable that must be positive."""
    raw = os.getenv(key, str(default))
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value <= 0:
        raise EnvironmentError(
            f"Invalid value for environment variable '{key}': {raw!r}. "
            f"Expected a positive integer."
        )
    return value


def _positive_float(key: str, default: float) -> float:
    raw = os.getenv(key, str(default))
    try:
        value = float(raw)
    except ValueError:
        value = 0.0
    if value <= 0:
        raise EnvironmentError(
            f"Invalid value for environment variable '{key}': {raw!r}. "
            f"Expected a positive number."
        )
    return value


# ── Orbit construction ────────────────────────────────────────────────────────
ORBIT_CAP: int = _positive_int("SLOPEGAP_ORBIT_CAP", 1_000_000)

# ── Searches ──────────────────────────────────────────────────────────────────
# Largest vertical (unscaled) height examined by seed and bounded searches.
SEARCH_LIMIT: int = _positive_int("SLOPEGAP_SEARCH_LIMIT", 400)
# Brute-force winner bound is BRUTE_FACTOR · alpha_eff · max(x0, y0).
BRUTE_FACTOR: int = _positive_int("SLOPEGAP_BRUTE_FACTOR", 20)

# ── Numerics ──────────────────────────────────────────────────────────────────
PRECISION_DPS: int = _positive_int("SLOPEGAP_PRECISION_DPS", 30)
KS_THRESHOLD: float = _positive_float("SLOPEGAP_KS_THRESHOLD", 0.02)

# ── Reproducibility & logging ─────────────────────────────────────────────────
SEED: int = int(os.getenv("SLOPEGAP_SEED", "0"))
LOG_LEVEL: str = os.getenv("SLOPEGAP_LOG_LEVEL", "INFO").upper()
