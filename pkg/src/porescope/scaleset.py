"""Finite-depth sets on the nonnegative half-line and their gap structure.

A :class:`ScaleSet` is the canonical truncated picture of a set E of
nonnegative reals accumulating at 0: the finitely many positive points that
survive truncation (sorted strictly decreasing), a flag for membership of 0,
and a flag saying whether anything can hide below the smallest point.  Every
representation is complete inside the window ``[min point, window_top]``:
gaps between consecutive points are real gaps of E there.  What lies below
the smallest point is unresolved unless the set is marked floor-resolved
(or 0 is known to be absent, in which case the region down to 0 is empty).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .logvalue import (
    DEFAULT_PREC,
    LogValue,
    Magnitude,
    ZERO,
    linear_difference,
    parse_rational,
)

__all__ = [
    "ScaleSet",
    "Gap",
    "TailRegion",
    "GapLadder",
    "OutsideWindowError",
    "DepthLimitedError",
    "make_scale_set",
    "gaps",
    "next_above",
    "linear_difference",
]


class OutsideWindowError(ValueError):
    """A query point lies above the truncation window."""


class DepthLimitedError(RuntimeError):
    """The truncated data cannot decide the quantity at this depth."""


@dataclass(frozen=True)
class Gap:
    """A maximal open interval (a, b) free of points of the owning set."""

    a: LogValue
    b: LogValue

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("gap endpoints must satisfy a < b")

    @property
    def ratio(self) -> LogValue:
        """b / a, exact."""
        return self.b.div(self.a)

    @property
    def ratio_log2(self) -> Fraction:
        """log2(b) - log2(a); exact whenever the ratio is a power of two."""
        return self.ratio.log2_fraction()

    def length(self, prec: int = DEFAULT_PREC) -> LogValue:
        """b - a under the linear-difference precision contract."""
        return linear_difference(self.b, self.a, prec)


@dataclass(frozen=True)
class TailRegion:
    """The region (0, upper) below the smallest represented point.

    ``resolved`` means the region is certainly empty; otherwise its content
    is unknown at this truncation depth.
    """

    upper: LogValue
    resolved: bool


@dataclass(frozen=True)
class GapLadder:
    """All interior gaps (decreasing left endpoints) plus the below-min region."""

    gaps: tuple[Gap, ...]
    below: TailRegion

    def __iter__(self):
        return iter(self.gaps)

    def __len__(self):
        return len(self.gaps)


class ScaleSet:
    """Sorted distinct positive points + zero membership, immutable."""

    __slots__ = ("points", "contains_zero", "floor_resolved", "_increasing")

    def __init__(
        self,
        points: Sequence[LogValue],
        contains_zero: bool,
        floor_resolved: bool = False,
    ):
        pts = sorted(set(points), reverse=True)
        if not pts:
            raise ValueError("empty set: at least one positive point required")
        if not all(isinstance(p, LogValue) for p in pts):
            raise ValueError("all points must be positive LogValues")
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "contains_zero", bool(contains_zero))
        object.__setattr__(self, "floor_resolved", bool(floor_resolved))
        object.__setattr__(self, "_increasing", tuple(reversed(pts)))

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("ScaleSet is immutable")

    @property
    def depth(self) -> int:
        return len(self.points)

    @property
    def window_top(self) -> LogValue:
        return self.points[0]

    @property
    def min_point(self) -> LogValue:
        return self.points[-1]

    @property
    def resolved_below_min(self) -> bool:
        """Whether (0, min point) is certainly free of points of E."""
        return self.floor_resolved or not self.contains_zero

    def __contains__(self, value: LogValue) -> bool:
        i = bisect.bisect_left(self._increasing, value)
        return i < len(self._increasing) and self._increasing[i] == value

    def __repr__(self):
        zero = " + {0}" if self.contains_zero else ""
        return f"ScaleSet({self.depth} points in [{self.min_point!r}, {self.window_top!r}]{zero})"

    def tail_points(self, window: int) -> tuple[LogValue, ...]:
        """The `window` smallest points, decreasing (toward 0 last)."""
        window = max(1, min(window, self.depth))
        return self.points[self.depth - window :]

    def descriptor(self) -> dict:
        """The JSON exchange form consumed by every other module."""
        from .logvalue import rational_str

        return {
            "kind": "explicit",
            "log2_points": [rational_str(p.log2_fraction()) for p in self.points],
            "contains_zero": self.contains_zero,
            **({"floor_resolved": True} if self.floor_resolved else {}),
        }


def make_scale_set(
    values: Iterable[Union[LogValue, int, str, Fraction]],
    contains_zero: bool,
    floor_resolved: bool = False,
) -> ScaleSet:
    """Build a ScaleSet from values, deduplicating and sorting.

    Values may be LogValues or exact rationals (converted losslessly).
    """
    pts = []
    for v in values:
        if isinstance(v, LogValue):
            pts.append(v)
        else:
            q = parse_rational(v)
            if q <= 0:
                raise ValueError("set points must be strictly positive")
            pts.append(LogValue.from_rational(q))
    return ScaleSet(pts, contains_zero, floor_resolved)


def gaps(e: ScaleSet) -> GapLadder:
    """All maximal empty open intervals of E inside the window.

    Interior gaps come out in decreasing order of left endpoint; the region
    below the smallest point is reported separately, resolved-empty only when
    the set vouches for its floor (0 absent, or explicitly floor-resolved).
    Degenerate gaps never occur because points are distinct.
    """
    interior = tuple(
        Gap(a=lo, b=hi) for hi, lo in zip(e.points, e.points[1:])
    )
    below = TailRegion(upper=e.min_point, resolved=e.resolved_below_min)
    return GapLadder(gaps=interior, below=below)


def next_above(e: ScaleSet, t: Union[LogValue, Magnitude]) -> Optional[LogValue]:
    """Smallest point of E that is >= t, or None when no such point exists
    inside the window.  Raises OutsideWindowError for t above the window top.
    """
    if t is ZERO or not isinstance(t, LogValue):
        return e.min_point if t is ZERO else None
    if t > e.window_top:
        raise OutsideWindowError("query point is outside the truncation window")
    inc = e._increasing
    i = bisect.bisect_left(inc, t)
    if i >= len(inc):
        return None
    return inc[i]


def next_strictly_above(e: ScaleSet, t: LogValue) -> Optional[LogValue]:
    """Smallest point of E strictly greater than t (None at the window top)."""
    if t >= e.window_top:
        return None
    inc = e._increasing
    i = bisect.bisect_right(inc, t)
    if i >= len(inc):
        return None
    return inc[i]


def next_at_or_below(e: ScaleSet, t: LogValue) -> Optional[LogValue]:
    """Largest point of E that is <= t, or None when t is below the window."""
    inc = e._increasing
    i = bisect.bisect_right(inc, t)
    if i == 0:
        return None
    return inc[i - 1]
