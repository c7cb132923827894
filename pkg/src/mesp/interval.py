"""Certified real intervals with exact rational endpoints.

Endpoints are :class:`fractions.Fraction` values, so addition, subtraction
and multiplication are exact.  Transcendental functions (``log``, ``exp``)
go through MPFR (via gmpy2) with directed rounding, which gives rigorous
enclosures at any requested working precision.  Results of long chains can
be trimmed with :meth:`Interval.round_out` to keep the denominators small.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import mpfr

__all__ = ["Interval", "log", "exp", "round_down", "round_up"]


def _floor_log2(x: Fraction) -> int:
    # floor(log2|x|) for x != 0, exact
    num, den = abs(x.numerator), x.denominator
    e = num.bit_length() - den.bit_length()
    if e >= 0:
        if num < den << e:
            e -= 1
    elif num << -e < den:
        e -= 1
    return e


def round_down(x: Fraction, bits: int) -> Fraction:
    """Largest dyadic rational with ``bits`` significant bits that is <= x."""
    if x == 0:
        return x
    shift = bits - 1 - _floor_log2(x)
    if shift >= 0:
        return Fraction((x.numerator << shift) // x.denominator, 1 << shift)
    scaled = x.numerator // (x.denominator << -shift)
    return Fraction(scaled << -shift)


def round_up(x: Fraction, bits: int) -> Fraction:
    return -round_down(-x, bits)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval ``[lo, hi]`` of reals with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x) -> Interval:
        x = _as_fraction(x)
        return cls(x, x)

    @classmethod
    def coerce(cls, x) -> Interval:
        return x if isinstance(x, Interval) else cls.exact(x)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Interval):
            c = _as_fraction(other)
            if c >= 0:
                return Interval(self.lo * c, self.hi * c)
            return Interval(self.hi * c, self.lo * c)
        if self.lo >= 0 and other.lo >= 0:
            return Interval(self.lo * other.lo, self.hi * other.hi)
        ps = (self.lo * other.lo, self.lo * other.hi,
              self.hi * other.lo, self.hi * other.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = _as_fraction(other)
        if c == 0:
            raise ZeroDivisionError("interval division by zero")
        return self * (1 / c)

    # queries ----------------------------------------------------------
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def sign(self):
        """+1 or -1 when certain, 0 for the exact zero, ``None`` if ambiguous."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def certainly_lt(self, other) -> bool:
        return self.hi < Interval.coerce(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= Interval.coerce(other).lo

    def hull(self, other) -> Interval:
        other = Interval.coerce(other)
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def round_out(self, bits: int) -> Interval:
        """Outward rounding of both endpoints to ``bits`` significant bits."""
        return Interval(round_down(self.lo, bits), round_up(self.hi, bits))

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        if self.is_exact:
            return f"Interval({self.lo})"
        return f"Interval([{float(self.lo)!r}, {float(self.hi)!r}])"


# transcendental enclosures ------------------------------------------------

def _mpfr_exact(x: Fraction, bits: int) -> mpfr:
    # x must be dyadic with at most `bits` significant bits
    den = x.denominator
    shift = den.bit_length() - 1
    assert den == 1 << shift
    with gmpy2.context(precision=bits + 2, emin=-(1 << 40), emax=1 << 40):
        return gmpy2.mul_2exp(mpfr(x.numerator), -shift)


def _to_fraction(v: mpfr) -> Fraction:
    return Fraction(*(int(t) for t in v.as_integer_ratio()))


def log(q, precision: int) -> Interval:
    """Enclosure of ``ln q`` for a rational ``q > 0``.

    The width is about ``2**-precision`` relative to ``max(1, |ln q|)``
    plus the input rounding error, which is relative ``2**-precision`` in q.
    """
    q = _as_fraction(q)
    if q <= 0:
        raise ValueError("log of a non-positive number")
    if q == 1:
        return Interval.exact(0)
    lo_in, hi_in = round_down(q, precision), round_up(q, precision)
    a, b = _mpfr_exact(lo_in, precision), _mpfr_exact(hi_in, precision)
    with gmpy2.context(precision=precision, round=gmpy2.RoundDown):
        lo = gmpy2.log(a)
    with gmpy2.context(precision=precision, round=gmpy2.RoundUp):
        hi = gmpy2.log(b)
    return Interval(_to_fraction(lo), _to_fraction(hi))


def exp(x, precision: int) -> Interval:
    """Enclosure of ``exp(x)`` for a rational or an :class:`Interval` x."""
    x = Interval.coerce(x)
    if x.hi == 0 and x.lo == 0:
        return Interval.exact(1)
    a = _mpfr_exact(round_down(x.lo, precision), precision)
    b = _mpfr_exact(round_up(x.hi, precision), precision)
    ctx = dict(precision=precision, emin=-(1 << 40), emax=1 << 40)
    with gmpy2.context(round=gmpy2.RoundDown, **ctx):
        lo = gmpy2.exp(a)
    with gmpy2.context(round=gmpy2.RoundUp, **ctx):
        hi = gmpy2.exp(b)
    return Interval(_to_fraction(lo), _to_fraction(hi))
