"""Reproducible builders for the test-set families used across the package.

The families:

* ``geometric(q)`` — points q**0..q**(depth-1); the canonical family whose
  gap ladder has a constant ratio (never strongly porous at 0).
* ``factorial`` — points 2**(-n!); gap ratios explode, the canonical
  completely strongly porous family.
* ``squared-exponential`` — points 2**(-n**2); gap ratios 2**(2n-1).
* ``example-2-8`` — the two-ladder construction driven by a partition of the
  index set: a base ladder tau with tau_{n+1} = 2**(-n^2) * tau_n and a
  satellite ladder tau*_n = 2**(-nu(class(n))) * tau_n.  Along any fixed
  partition class the satellite sits at a constant power-of-two offset below
  the base rung, which is what forces bounded gaps along that class while the
  set stays porous along suitable subsequences.
* ``explicit`` — points given by their exact log2 exponents.

All builders are pure: the same spec yields the identical ScaleSet.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .logvalue import LogValue, parse_rational, rational_str
from .scaleset import ScaleSet, make_scale_set

__all__ = [
    "PartitionSpec",
    "TraceRow",
    "gen_geometric",
    "gen_factorial",
    "gen_squared_exponential",
    "gen_example_2_8",
    "gen_from_descriptor",
    "random_ladder",
]

#: Exponents for example-2-8 grow cubically; beyond this depth the exact
#: integers are still cheap but nothing new is learned.
EXAMPLE_2_8_DEPTH_CAP = 60


@dataclass(frozen=True)
class PartitionSpec:
    """A partition of 1..depth into classes with strictly increasing minima.

    kind "dyadic-classes": class k holds the odd multiples of 2**(k-1), so
    nu(k) = 2**(k-1) and the class of n is 1 + (2-adic valuation of n).
    kind "explicit": classes given outright; they must be disjoint, cover
    1..depth, and have strictly increasing minima.
    """

    kind: str = "dyadic-classes"
    classes: Optional[tuple[tuple[int, ...], ...]] = None

    def class_of(self, n: int) -> int:
        """1-based class index of n."""
        if self.kind == "dyadic-classes":
            return 1 + (n & -n).bit_length() - 1
        for k, members in enumerate(self.classes, start=1):
            if n in members:
                return k
        raise ValueError(f"index {n} not covered by the partition")

    def nu(self, k: int) -> int:
        """Smallest member of class k."""
        if self.kind == "dyadic-classes":
            return 1 << (k - 1)
        return min(self.classes[k - 1])

    def validate(self, depth: int) -> None:
        if self.kind == "dyadic-classes":
            return
        if self.kind != "explicit" or not self.classes:
            raise ValueError("partition kind must be dyadic-classes or explicit")
        seen: set[int] = set()
        for members in self.classes:
            if not members:
                raise ValueError("empty partition class")
            if seen & set(members):
                raise ValueError("partition classes must be disjoint")
            seen |= set(members)
        if seen != set(range(1, depth + 1)):
            raise ValueError(f"partition must cover 1..{depth} exactly")
        minima = [min(m) for m in self.classes]
        if any(b <= a for a, b in zip(minima, minima[1:])):
            raise ValueError("class minima nu(1) < nu(2) < ... must be strictly increasing")


@dataclass(frozen=True)
class TraceRow:
    """One row of the two-ladder construction trace."""

    n: int
    log2_tau: int
    klass: int
    nu: int
    log2_tau_star: int


def gen_geometric(q: Fraction, depth: int) -> ScaleSet:
    """Points q**0 .. q**(depth-1) together with 0."""
    q = parse_rational(q)
    if not 0 < q < 1:
        raise ValueError("geometric ratio must satisfy 0 < q < 1")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    base = LogValue.from_rational(q)
    return ScaleSet([base**j for j in range(depth)], contains_zero=True)


def gen_factorial(depth: int) -> ScaleSet:
    """Points 2**(-n!) for n = 1..depth together with 0."""
    if depth < 2:
        raise ValueError("depth must be at least 2")
    return ScaleSet(
        [LogValue.from_log2(-math.factorial(n)) for n in range(1, depth + 1)],
        contains_zero=True,
    )


def gen_squared_exponential(depth: int) -> ScaleSet:
    """Points 2**(-n**2) for n = 1..depth together with 0."""
    if depth < 2:
        raise ValueError("depth must be at least 2")
    return ScaleSet(
        [LogValue.from_log2(-(n * n)) for n in range(1, depth + 1)],
        contains_zero=True,
    )


def gen_example_2_8(
    depth: int, partition: Optional[PartitionSpec] = None
) -> tuple[ScaleSet, list[TraceRow]]:
    """The two-ladder set E = {tau_n} + {tau*_n} + {0} with its trace table.

    tau_1 = 1 and tau_{n+1} = 2**(-n^2) tau_n, so log2 tau_n is the exact
    integer -(n-1)n(2n-1)/6.  The satellite rung is tau*_n = 2**(-nu) tau_n
    where nu is the minimum of n's partition class.  Construction-level
    sanity is enforced on every row:

    * n >= nu(class(n)) >= class(n);
    * tau_{n+1} <= 2**(-n) tau_n <= tau*_n < tau_n, strictly below for n >= 2;
    * the ratio tau_{n+1}/tau*_n decreases strictly monotonically (toward 0).
    """
    if depth < 4:
        raise ValueError("depth must be at least 4")
    if depth > EXAMPLE_2_8_DEPTH_CAP:
        raise ValueError(f"depth capped at {EXAMPLE_2_8_DEPTH_CAP}")
    partition = partition or PartitionSpec()
    partition.validate(depth)

    rows: list[TraceRow] = []
    log2_tau = 0
    prev_gap_exp = None
    for n in range(1, depth + 1):
        k = partition.class_of(n)
        nu = partition.nu(k)
        if not n >= nu >= k:
            raise ValueError(f"partition violates n >= nu >= class at n={n}")
        log2_star = log2_tau - nu
        # chain: tau_{n+1} <= 2**-n tau_n <= tau*_n < tau_n
        log2_next = log2_tau - n * n
        if not (log2_next <= log2_tau - n <= log2_star < log2_tau):
            raise ValueError(f"ladder ordering violated at n={n}")
        if n >= 2 and not log2_star < log2_tau:
            raise ValueError(f"satellite must sit strictly below the rung at n={n}")
        gap_exp = log2_next - log2_star  # log2 of tau_{n+1}/tau*_n
        if prev_gap_exp is not None and not gap_exp < prev_gap_exp:
            raise ValueError(f"satellite-to-next ratio must decrease at n={n}")
        prev_gap_exp = gap_exp
        rows.append(TraceRow(n=n, log2_tau=log2_tau, klass=k, nu=nu, log2_tau_star=log2_star))
        log2_tau = log2_next

    points = [LogValue.from_log2(r.log2_tau) for r in rows]
    points += [LogValue.from_log2(r.log2_tau_star) for r in rows]
    return ScaleSet(points, contains_zero=True), rows


def random_ladder(seed: int, depth: int, style: str = "auto") -> ScaleSet:
    """A seeded random point ladder with integer log2 gaps.

    style "bounded": successive gap exponents drawn from 1..6 (gap ratios stay
    bounded, so the set is nowhere near strongly porous).  style
    "accelerating": gap exponent n + noise (ratios diverge, the set is
    strongly porous along every tail).  style "auto" picks by seed parity.
    """
    if depth < 8:
        raise ValueError("depth must be at least 8")
    rng = random.Random(seed)
    if style == "auto":
        style = "bounded" if seed % 2 == 0 else "accelerating"
    exps = [0]
    for n in range(1, depth):
        if style == "bounded":
            step = rng.randint(1, 6)
        elif style == "accelerating":
            step = n + rng.randint(0, 3)
        else:
            raise ValueError(f"unknown ladder style: {style}")
        exps.append(exps[-1] - step)
    return ScaleSet([LogValue.from_log2(e) for e in exps], contains_zero=True)


def _require(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ValueError(f"descriptor {path}: {message}")


def gen_from_descriptor(descriptor: dict) -> ScaleSet:
    """Dispatch a JSON set descriptor to the builders above.

    Schema violations raise ValueError naming the offending field path.
    """
    _require(isinstance(descriptor, dict), "$", "must be an object")
    kind = descriptor.get("kind")
    _require(isinstance(kind, str), "$.kind", "must be a string")

    if kind == "explicit":
        pts = descriptor.get("log2_points")
        _require(isinstance(pts, list) and pts, "$.log2_points", "must be a nonempty list")
        values = []
        for i, s in enumerate(pts):
            try:
                values.append(LogValue.from_log2(parse_rational(s)))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"descriptor $.log2_points[{i}]: {exc}") from exc
        cz = descriptor.get("contains_zero", True)
        _require(isinstance(cz, bool), "$.contains_zero", "must be a boolean")
        fr = descriptor.get("floor_resolved", False)
        _require(isinstance(fr, bool), "$.floor_resolved", "must be a boolean")
        return ScaleSet(values, contains_zero=cz, floor_resolved=fr)

    depth = descriptor.get("depth")
    _require(isinstance(depth, int) and depth >= 1, "$.depth", "must be a positive integer")

    if kind == "geometric":
        q = descriptor.get("q")
        _require(q is not None, "$.q", "is required for geometric sets")
        try:
            ratio = parse_rational(q)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"descriptor $.q: {exc}") from exc
        return gen_geometric(ratio, depth)
    if kind == "factorial":
        return gen_factorial(depth)
    if kind == "squared-exponential":
        return gen_squared_exponential(depth)
    if kind == "example-2-8":
        part = descriptor.get("partition")
        spec = None
        if part is not None:
            _require(isinstance(part, dict), "$.partition", "must be an object")
            pkind = part.get("kind", "dyadic-classes")
            if pkind == "explicit":
                classes = part.get("classes")
                _require(
                    isinstance(classes, list) and classes,
                    "$.partition.classes",
                    "must be a nonempty list of index lists",
                )
                spec = PartitionSpec(
                    kind="explicit",
                    classes=tuple(tuple(int(i) for i in c) for c in classes),
                )
            else:
                _require(
                    pkind == "dyadic-classes", "$.partition.kind", "unknown partition kind"
                )
                spec = PartitionSpec()
        return gen_example_2_8(depth, spec)[0]
    if kind == "random-ladder":
        seed = descriptor.get("seed", 0)
        _require(isinstance(seed, int), "$.seed", "must be an integer")
        style = descriptor.get("style", "auto")
        return random_ladder(seed, depth, style)

    raise ValueError(f"descriptor $.kind: unknown kind {kind!r}")


def trace_csv_rows(rows: Sequence[TraceRow]) -> list[dict]:
    """Trace table rows in the column layout of the trace CSV."""
    return [
        {
            "n": r.n,
            "log2_tau": rational_str(Fraction(r.log2_tau)),
            "class": r.klass,
            "nu": r.nu,
            "log2_tau_star": rational_str(Fraction(r.log2_tau_star)),
        }
        for r in rows
    ]
