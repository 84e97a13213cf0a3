"""Exact arithmetic for strictly positive reals of extreme dynamic range.

A :class:`LogValue` is stored as ``mantissa * 2**exp2`` with an exact rational
mantissa normalized into [1, 2) and an exact rational exponent.  This is the
only representation in the package that survives magnitudes like ``2**(-n!)``
at n = 40 while still holding ordinary rationals (``3 * 2**-12``, ``1/3``)
without loss.  Products, quotients, integer powers and order comparisons are
exact; the sole inexact operations are the linear-scale difference and the
conversion helpers, which carry an explicit precision parameter (default 128
fractional bits, contractually at least 64).

Zero is never a LogValue; the :data:`ZERO` sentinel stands in for it where a
nonnegative magnitude is needed (metric distances, set membership flags).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

import gmpy2

#: Default number of fractional bits for the inexact operations.
DEFAULT_PREC = 128

#: Guard bits carried internally so results are correctly rounded at the
#: requested precision with overwhelming margin.
_GUARD = 64

#: Largest |integer exponent| for which a LogValue is converted to an exact
#: linear Fraction; beyond it the conversion underflows to 0 or raises.
LINEAR_EXP_CAP = 1 << 14


def _floor_log2_fraction(q: Fraction) -> int:
    """Exact floor(log2(q)) for a positive rational, by integer shifts."""
    a, b = q.numerator, q.denominator
    if a <= 0:
        raise ValueError("floor_log2 requires a positive rational")
    k = a.bit_length() - b.bit_length()

    def pow2_le(j: int) -> bool:
        # 2**j <= a/b
        return (b << j) <= a if j >= 0 else b <= (a << -j)

    if not pow2_le(k):
        k -= 1
    if pow2_le(k + 1):
        k += 1
    assert pow2_le(k) and not pow2_le(k + 1)
    return k


def _shift(q: Fraction, k: int) -> Fraction:
    """q * 2**k exactly."""
    if k >= 0:
        return Fraction(q.numerator << k, q.denominator)
    return Fraction(q.numerator, q.denominator << -k)


def _as_fraction(x: Union[int, str, Fraction]) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def pow2_fraction(e: Fraction, prec: int = DEFAULT_PREC) -> Fraction:
    """2**e as a rational, rounded at `prec` fractional bits for non-integers.

    The integer part of e is split off and applied exactly, so only
    2**frac(e) with frac(e) in [0, 1) goes through the rounding step.
    """
    e = _as_fraction(e)
    n = e.__floor__()
    f = e - n
    if abs(n) > LINEAR_EXP_CAP:
        if n < 0:
            return Fraction(0)
        raise OverflowError("2**%s exceeds the linear representation cap" % e)
    base = _shift(Fraction(1), int(n))
    if f == 0:
        return base
    with gmpy2.context(precision=prec + _GUARD):
        v = gmpy2.exp2(gmpy2.mpfr(gmpy2.mpq(f.numerator, f.denominator)))
        q = gmpy2.mpq(v)
    return base * Fraction(int(q.numerator), int(q.denominator))


def log2_fraction(q: Fraction, prec: int = DEFAULT_PREC) -> Fraction:
    """log2 of a positive rational, rounded at `prec` fractional bits.

    Exact when q is a power of two.
    """
    q = _as_fraction(q)
    if q <= 0:
        raise ValueError("log2 requires a positive rational")
    k = _floor_log2_fraction(q)
    m = _shift(q, -k)  # in [1, 2)
    if m == 1:
        return Fraction(k)
    with gmpy2.context(precision=prec + _GUARD):
        v = gmpy2.log2(gmpy2.mpfr(gmpy2.mpq(m.numerator, m.denominator)))
        r = gmpy2.mpq(v)
    return Fraction(k) + Fraction(int(r.numerator), int(r.denominator))


class LogValue:
    """A strictly positive real, exact under *, /, integer ** and comparison."""

    __slots__ = ("mantissa", "exp2")

    def __init__(self, mantissa: Fraction, exp2: Fraction):
        # Internal: inputs must already be normalized. Use the from_* builders.
        self.mantissa = mantissa
        self.exp2 = exp2

    # -- construction -------------------------------------------------------

    @staticmethod
    def _make(m: Fraction, e: Fraction) -> "LogValue":
        if m <= 0:
            raise ValueError("LogValue must be strictly positive")
        k = _floor_log2_fraction(m)
        if k:
            m = _shift(m, -k)
            e = e + k
        return LogValue(m, e)

    @classmethod
    def from_log2(cls, exp2: Union[int, str, Fraction]) -> "LogValue":
        """The value 2**exp2 for an exact rational exponent."""
        return cls(Fraction(1), _as_fraction(exp2))

    @classmethod
    def from_rational(cls, value: Union[int, str, Fraction]) -> "LogValue":
        """An exact positive rational as a LogValue (no rounding)."""
        v = _as_fraction(value)
        return cls._make(v, Fraction(0))

    @classmethod
    def one(cls) -> "LogValue":
        return cls(Fraction(1), Fraction(0))

    # -- exact queries -------------------------------------------------------

    @property
    def log2_exact(self) -> Union[Fraction, None]:
        """The exact rational log2 of the value, or None if it is irrational."""
        return self.exp2 if self.mantissa == 1 else None

    def log2_fraction(self, prec: int = DEFAULT_PREC) -> Fraction:
        """log2 of the value; exact when the mantissa is 1, else rounded."""
        if self.mantissa == 1:
            return self.exp2
        return self.exp2 + log2_fraction(self.mantissa, prec)

    def as_fraction(self) -> Union[Fraction, None]:
        """The exact rational value, or None when not exactly representable
        (non-integral exponent) or beyond the linear cap."""
        if self.exp2.denominator != 1 or abs(self.exp2) > LINEAR_EXP_CAP:
            return None
        return _shift(self.mantissa, int(self.exp2))

    def approx_fraction(self, prec: int = DEFAULT_PREC) -> Fraction:
        """A rational approximation of the value at `prec` fractional bits.

        Exact whenever the exponent is a moderate integer.  Underflows to 0
        for exponents below -LINEAR_EXP_CAP; raises OverflowError above it.
        """
        exact = self.as_fraction()
        if exact is not None:
            return exact
        if self.exp2 < -LINEAR_EXP_CAP:
            return Fraction(0)
        if self.exp2 > LINEAR_EXP_CAP:
            raise OverflowError("value exceeds the linear representation cap")
        return self.mantissa * pow2_fraction(self.exp2, prec)

    # -- exact arithmetic ----------------------------------------------------

    def mul(self, other: "LogValue") -> "LogValue":
        return LogValue._make(self.mantissa * other.mantissa, self.exp2 + other.exp2)

    def div(self, other: "LogValue") -> "LogValue":
        return LogValue._make(self.mantissa / other.mantissa, self.exp2 - other.exp2)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        return self.mul(other)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        return self.div(other)

    def __pow__(self, n: int) -> "LogValue":
        if not isinstance(n, int):
            return NotImplemented
        return LogValue._make(self.mantissa**n, self.exp2 * n)

    def times_rational(self, k: Union[int, str, Fraction]) -> "LogValue":
        """Exact product with a positive rational scalar."""
        k = _as_fraction(k)
        if k <= 0:
            raise ValueError("scalar must be positive")
        return LogValue._make(self.mantissa * k, self.exp2)

    def times2exp(self, j: Union[int, Fraction]) -> "LogValue":
        """Exact product with 2**j."""
        return LogValue(self.mantissa, self.exp2 + _as_fraction(j))

    def reciprocal(self) -> "LogValue":
        return LogValue._make(1 / self.mantissa, -self.exp2)

    # -- exact order ---------------------------------------------------------

    def _cmp(self, other: "LogValue") -> int:
        de = self.exp2 - other.exp2
        if de == 0:
            m1, m2 = self.mantissa, other.mantissa
            return (m1 > m2) - (m1 < m2)
        if de >= 1:
            return 1
        if de <= -1:
            return -1
        # |de| < 1 and de != 0; compare (m1/m2) * 2**de against 1.
        r = self.mantissa / other.mantissa
        p, q = de.numerator, de.denominator
        if q == 1:
            # integer de in (-1, 1) excluding 0 cannot happen
            raise AssertionError("unreachable exponent difference")
        lhs_num = r.numerator**q
        lhs_den = r.denominator**q
        if p >= 0:
            lhs_num <<= p
        else:
            lhs_den <<= -p
        return (lhs_num > lhs_den) - (lhs_num < lhs_den)

    def __lt__(self, other):
        if isinstance(other, _ZeroMagnitude):
            return False
        return self._cmp(other) < 0

    def __le__(self, other):
        if isinstance(other, _ZeroMagnitude):
            return False
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if isinstance(other, _ZeroMagnitude):
            return True
        return self._cmp(other) > 0

    def __ge__(self, other):
        if isinstance(other, _ZeroMagnitude):
            return True
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, LogValue):
            return self.mantissa == other.mantissa and self.exp2 == other.exp2
        if isinstance(other, _ZeroMagnitude):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.mantissa, self.exp2))

    def __repr__(self):
        if self.mantissa == 1:
            return f"LogValue(2**({self.exp2}))"
        return f"LogValue({self.mantissa} * 2**({self.exp2}))"

    def __float__(self):
        try:
            return float(self.approx_fraction(64))
        except OverflowError:
            return float("inf")


class _ZeroMagnitude:
    """Singleton standing in for the value 0 next to LogValues.

    Orders below every LogValue and equals only itself.
    """

    __slots__ = ()

    def __lt__(self, other):
        return isinstance(other, LogValue)

    def __le__(self, other):
        return isinstance(other, (LogValue, _ZeroMagnitude))

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _ZeroMagnitude)

    def __eq__(self, other):
        return isinstance(other, _ZeroMagnitude)

    def __hash__(self):
        return hash("_ZeroMagnitude")

    def __repr__(self):
        return "ZERO"

    def __float__(self):
        return 0.0


#: The nonnegative-magnitude zero sentinel.
ZERO = _ZeroMagnitude()

#: A nonnegative magnitude: either a positive LogValue or ZERO.
Magnitude = Union[LogValue, _ZeroMagnitude]


def linear_difference(x: LogValue, y: LogValue, prec: int = DEFAULT_PREC) -> LogValue:
    """x - y for x > y, computed stably in the scaled representation.

    Precision contract: the result is exact whenever the exponent difference
    is an integer of magnitude at most ``prec + 64``; otherwise the relative
    error is below ``2**-prec`` (the ratio y/x is rounded at ``prec + 64``
    fractional bits before subtraction).
    """
    if not (isinstance(x, LogValue) and isinstance(y, LogValue)):
        raise TypeError("linear_difference expects LogValue operands")
    if x <= y:
        raise ValueError("nonpositive difference: x must exceed y")
    r = y.div(x)  # exact, < 1
    if r.exp2 < -(prec + _GUARD):
        # 1 - r rounds to 1 at this precision
        return x
    if r.exp2.denominator == 1:
        rv = _shift(r.mantissa, int(r.exp2))  # exact rational in (0, 1)
    else:
        rv = r.approx_fraction(prec + _GUARD)
        if rv >= 1:  # guard against rounding at the top edge
            rv = 1 - Fraction(1, 1 << (prec + _GUARD))
    return x.times_rational(1 - rv)


def mag_div(num: Magnitude, den: LogValue) -> Magnitude:
    """num / den where num may be ZERO."""
    if num is ZERO or isinstance(num, _ZeroMagnitude):
        return ZERO
    return num.div(den)


def mag_fraction(v: Magnitude, prec: int = DEFAULT_PREC) -> Fraction:
    """A magnitude as a rational approximation (ZERO -> 0)."""
    if isinstance(v, _ZeroMagnitude):
        return Fraction(0)
    return v.approx_fraction(prec)


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse 'p/q' (or integer / decimal) strings into an exact Fraction."""
    return _as_fraction(text)


def rational_str(q: Fraction) -> str:
    """Canonical 'p/q' (or 'p') rendering used by every report writer."""
    q = _as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
