"""
Runtime defaults for the toric factorization toolkit.

Every value can be overridden from the environment (TORIC_*); per-call
arguments always win over these.
"""

import os


def _env_int(name, default):
    value = os.environ.get(name)
    if value is None or value.strip() == "":
        return default
    return int(value)


def _env_float(name, default):
    value = os.environ.get(name)
    if value is None or value.strip() == "":
        return default
    return float(value)


LOG_LEVEL = os.environ.get("TORIC_LOG_LEVEL", "INFO").upper()

# Largest state space pairs_model will build (2^(2n) states)
MAX_STATES = _env_int("TORIC_MAX_STATES", 4096)

# global_statements enumerates 4^n vertex assignments
GLOBAL_MAX_VERTICES = _env_int("TORIC_GLOBAL_MAX_VERTICES", 8)

# Largest fiber enumerate_fiber will materialize
FIBER_CAP = _env_int("TORIC_FIBER_CAP", 200_000)

# Monomial multiplier search depth for the pairwise-ideal membership check
MULTIPLIER_MAX_DEGREE = _env_int("TORIC_MULTIPLIER_MAX_DEGREE", 4)

# Relative tolerance for parameter recovery verification
DEFAULT_TOL = _env_float("TORIC_DEFAULT_TOL", 1e-9)

# Gröbner pipeline wall-clock budget in seconds (None = unlimited)
DEFAULT_BUDGET_SECONDS = _env_float("TORIC_BUDGET_SECONDS", None)

# Random stream for the explorer's fiber walk page
DEFAULT_WALK_STEPS = _env_int("TORIC_WALK_STEPS", 1000)
DEFAULT_WALK_SEED = _env_int("TORIC_WALK_SEED", 0)
