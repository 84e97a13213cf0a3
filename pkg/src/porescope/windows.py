"""Tail-window splitting and trend detection for truncated sequences.

Asymptotic claims ("for sufficiently large n", limsup, divergence) are judged
on the tail of a truncated sequence.  The helpers here are deliberately
comparison-only so they work on exact Fractions and LogValues alike.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

STABLE = "stable"
INCREASING = "increasing"
DECREASING = "decreasing"


def tail_slice(n: int, fraction: Fraction = Fraction(1, 2)) -> slice:
    """Index slice selecting the trailing `fraction` of a length-n sequence."""
    if n <= 0:
        raise ValueError("empty sequence has no tail")
    w = max(1, int(-(-n * fraction.numerator // fraction.denominator)))
    return slice(n - min(w, n), n)


def halves(values: Sequence) -> tuple[Sequence, Sequence]:
    """Split into a leading and trailing half (trailing = closer to the limit)."""
    n = len(values)
    mid = n // 2
    return values[:mid], values[mid:]


def sup_trend(values: Sequence) -> str:
    """Compare suprema of the two halves with exact ordering.

    increasing when the later half's sup strictly exceeds the earlier one's,
    decreasing for the strict opposite, stable on equality.  Sequences shorter
    than 2 are stable by convention.
    """
    if len(values) < 2:
        return STABLE
    first, second = halves(values)
    s1, s2 = max(first), max(second)
    if s2 > s1:
        return INCREASING
    if s2 < s1:
        return DECREASING
    return STABLE


def nondecreasing_across_halves(values: Sequence) -> bool:
    return sup_trend(values) != DECREASING


def strictly_separated_up(values: Sequence) -> bool:
    """Whole later half strictly above the whole earlier half (upward drift)."""
    if len(values) < 2:
        return False
    first, second = halves(values)
    return min(second) > max(first)


def strictly_separated_down(values: Sequence) -> bool:
    """Whole later half strictly below the whole earlier half (downward drift)."""
    if len(values) < 2:
        return False
    first, second = halves(values)
    return max(second) < min(first)


def quarters_monotone_up(values: Sequence) -> bool:
    """Strict growth of both per-quarter suprema and infima.

    The finite-depth marker for 'grows without bound': every quarter of the
    window sits strictly above the previous one at both ends.
    """
    n = len(values)
    if n < 4:
        return False
    qs = []
    for i in range(4):
        lo = (n * i) // 4
        hi = (n * (i + 1)) // 4
        chunk = values[lo:hi]
        if not chunk:
            return False
        qs.append((min(chunk), max(chunk)))
    return all(qs[i + 1][0] > qs[i][0] and qs[i + 1][1] > qs[i][1] for i in range(3))
