"""
config.py - elimdist: Configuration

Every cap that guards an exponential search lives here. Values come from
the environment (or a .env file next to where you run the tool), so a
desk experiment can raise a cap without touching code:

    ELIMDIST_SIZE_CAP=24 python -m elimdist dist g.el f.fol --variant depth

Library functions take an explicit `cap=` keyword that wins over these
values; `None` means "read the module constant at call time".
"""

import os

from dotenv import load_dotenv

load_dotenv()


# =============================================================================
# Configuration
# =============================================================================

# Exact solvers scan 2^n vertex subsets
SIZE_CAP = int(os.getenv("ELIMDIST_SIZE_CAP", "20"))

# MSOL set quantifiers enumerate 2^n subsets per nesting level
MSOL_CAP = int(os.getenv("ELIMDIST_MSOL_CAP", "6"))

# Exhaustive family verification: n <= 16 and a + b <= 6
FAMILY_VERIFY_MAX_N = int(os.getenv("ELIMDIST_FAMILY_VERIFY_N", "16"))
FAMILY_VERIFY_MAX_AB = 6

# Greedy set-cover families are only built when the explicit
# (candidate x constraint) matrix has at most this many cells
GREEDY_FAMILY_BUDGET = int(os.getenv("ELIMDIST_GREEDY_BUDGET", str(1 << 25)))

# Largest reduction graph the equivalence check will hand to exact solvers
REDUCTION_CAP = int(os.getenv("ELIMDIST_REDUCTION_CAP", "24"))

DEFAULT_SEED = int(os.getenv("ELIMDIST_SEED", "0"))

# Reserved prefix for padding variables
DUMMY_PREFIX = "_d"


def resolve_cap(cap: int | None, default_name: str) -> int:
    """Return `cap` if given, else the current value of a module constant."""
    if cap is not None:
        return cap
    return globals()[default_name]
