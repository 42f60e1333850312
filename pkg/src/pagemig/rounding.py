"""Integerization rules for real-valued step counts.

Every quantity of the form "a real number of requests" is turned into an
integer with one fixed rule per category, used consistently everywhere:

    window sizes   (eps*D)              round half up, clamped to >= 1
    thresholds     (q*W)                floor
    delays         (6*q*D, q*D)         ceil
    block lengths  ((1-q)*D, 2*q*D)     round half up
    suffix lengths (q*n)                floor

Flooring thresholds errs toward detecting violations; ceiling delays errs
toward waiting longer before trusting the prediction.
"""

import math


def round_half_up(x: float) -> int:
    """Round to the nearest integer, with .5 going up (not banker's)."""
    return int(math.floor(x + 0.5))


def window_size(x: float) -> int:
    """Integer window/period length for a real request count, at least 1."""
    return max(1, round_half_up(x))


def threshold_count(x: float) -> int:
    """Integer mismatch budget for a real count: floor."""
    return int(math.floor(x))


def delay_steps(x: float) -> int:
    """Integer delay for a real step count: ceil, never negative."""
    return max(0, int(math.ceil(x)))
