"""
Runtime configuration for the Good-Turing risk toolkit
"""

import os

from errors import ConfigurationError


class Config:
    # Worker threads for the parallel sums (None lets the pool decide)
    THREADS = None

    # Output
    CSV_DIGITS = 12

    # Numerical limits
    ORACLE_LIMIT = 10**7
    NORMALIZATION_TOL = 1e-9
    EXACT_WARN_M = 10**4
    EXACT_BLOCK = 256
    MC_DESK_M = 2000

    # Worst-case solver
    SCAN_POINTS = 10**4
    GOLDEN_TOL = 1e-10
    DEFAULT_N_REF = 1000

    JSON_SORT_KEYS = False


def thread_count():
    """Read GT_RISK_THREADS at call time; None means no cap"""
    raw = os.environ.get('GT_RISK_THREADS', '').strip()
    if not raw:
        return Config.THREADS
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"GT_RISK_THREADS must be an integer, got {raw!r}")
    if value < 0:
        raise ConfigurationError(f"GT_RISK_THREADS must be >= 0, got {value}")
    return value or None


def format_number(value, digits=None):
    """12 significant digits, '.' separator, no locale"""
    if value is None:
        return ''
    if digits is None:
        digits = Config.CSV_DIGITS
    return f"{float(value):.{digits}g}"
