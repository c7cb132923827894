"""Exact sign predicates for planar points with logarithmic coordinates.

A coordinate is a rational constant plus a rational combination of ``ln b``
over a basis of pairwise coprime integers ``b > 1``.  Every ``-ln q`` with
``q`` rational in ``(0, 1]`` has such a form, and so do all sums and
differences.  The orientation tests used by the sweeps (cross and dot
products of two difference vectors) are quadratic forms in these logs.

Signs are decided in three steps: a floating-point filter with a generous
error bound; a symbolic check (a form whose coefficients all cancel is
exactly zero); and otherwise interval evaluation with doubling precision.
The symbolic step is what settles the exact ties that small-denominator
inputs produce in abundance (``ln 2 ln 9 = ln 3 ln 4``).
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from . import interval as iv
from .errors import PrecisionInsufficient
from .interval import Interval

CONST = -1  # basis key of the rational unit
FILTER_REL = 1e-11
MAX_PRECISION = 1 << 14


class Vec(NamedTuple):
    """Planar vector: float shadows, magnitude bounds, exact forms."""

    fx: float
    fy: float
    mx: float  # bound on |x| before cancellation, for the float filter
    my: float
    sx: dict
    sy: dict


def _lin_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, c in b.items():
        v = out.get(key, 0) - c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def _lin_add(a: dict, b: dict) -> dict:
    return _lin_sub(a, {key: -c for key, c in b.items()})


def sub(u: Vec, v: Vec) -> Vec:
    return Vec(u.fx - v.fx, u.fy - v.fy, u.mx + v.mx, u.my + v.my,
               _lin_sub(u.sx, v.sx), _lin_sub(u.sy, v.sy))


def add(u: Vec, v: Vec) -> Vec:
    return Vec(u.fx + v.fx, u.fy + v.fy, u.mx + v.mx, u.my + v.my,
               _lin_add(u.sx, v.sx), _lin_add(u.sy, v.sy))


def is_zero(v: Vec) -> bool:
    return not v.sx and not v.sy


def coprime_basis(numbers) -> list:
    """Pairwise coprime integers > 1 over which every input factors."""
    basis = []
    for x in numbers:
        stack = [int(x)]
        while stack:
            x = stack.pop()
            if x <= 1:
                continue
            for i, b in enumerate(basis):
                g = math.gcd(x, b)
                if g == 1:
                    continue
                if g == b:
                    stack.append(x // b)
                else:
                    basis.pop(i)
                    stack.extend((g, b // g, x // g))
                break
            else:
                basis.append(x)
    return sorted(basis)


class LogField:
    """Coordinate system shared by a set of points; see the module docstring."""

    def __init__(self, numbers=()):
        self.basis = coprime_basis(numbers)
        self._float_logs = [math.log(b) for b in self.basis]
        self._iv_logs = {}

    @classmethod
    def for_tails(cls, dists) -> LogField:
        nums = []
        for dist in dists:
            for q in dist.tails:
                nums.extend((q.numerator, q.denominator))
        return cls(nums)

    def _factor(self, x: int) -> dict:
        out = {}
        for i, b in enumerate(self.basis):
            e = 0
            while x % b == 0:
                x //= b
                e += 1
            if e:
                out[i] = e
        if x != 1:
            raise ValueError(f"{x} does not factor over the basis")
        return out

    def neg_log(self, q: Fraction) -> dict:
        """Exact form of ``-ln q``."""
        q = Fraction(q)
        if q <= 0:
            raise ValueError("logarithm of a non-positive number")
        return _lin_sub(self._factor(q.denominator), self._factor(q.numerator))

    def _float(self, form: dict):
        val = mag = 0.0
        for key, c in form.items():
            t = float(c) * (1.0 if key == CONST else self._float_logs[key])
            val += t
            mag += abs(t)
        return val, mag

    def vec(self, sx: dict, sy: dict) -> Vec:
        fx, mx = self._float(sx)
        fy, my = self._float(sy)
        return Vec(fx, fy, mx, my, sx, sy)

    def log_point(self, tails) -> Vec:
        """``(-ln q_1, -ln q_2)``."""
        if len(tails) != 2:
            raise ValueError("planar points need exactly two tails")
        return self.vec(self.neg_log(tails[0]), self.neg_log(tails[1]))

    def rational_point(self, coords) -> Vec:
        x, y = (Fraction(c) for c in coords)
        return self.vec({CONST: x} if x else {}, {CONST: y} if y else {})

    # evaluation -------------------------------------------------------------

    def _ln(self, key: int, precision: int) -> Interval:
        if key == CONST:
            return Interval.exact(1)
        cache = self._iv_logs.setdefault(precision, {})
        if key not in cache:
            cache[key] = iv.log(Fraction(self.basis[key]), precision)
        return cache[key]

    def interval(self, form: dict, precision: int = 64) -> Interval:
        total = Interval.exact(0)
        for key, c in form.items():
            total = total + self._ln(key, precision) * Fraction(c)
        return total

    def _sign(self, terms, fval: float, ferr: float) -> int:
        """Sign of ``sum(s * a * b)`` over ``terms = [(s, a, b), ...]``."""
        if abs(fval) > ferr:
            return 1 if fval > 0 else -1
        quad = {}
        for s, a, b in terms:
            for ka, ca in a.items():
                for kb, cb in b.items():
                    key = (ka, kb) if ka <= kb else (kb, ka)
                    quad[key] = quad.get(key, 0) + s * ca * cb
        quad = {key: c for key, c in quad.items() if c}
        if not quad:
            return 0
        precision = 64
        while precision <= MAX_PRECISION:
            total = Interval.exact(0)
            for (ka, kb), c in quad.items():
                total = total + self._ln(ka, precision) * self._ln(kb, precision) * Fraction(c)
            s = total.sign()
            if s is not None and s != 0:
                return s
            precision *= 2
        raise PrecisionInsufficient("could not separate a nonzero orientation test from 0")

    def cross_sign(self, u: Vec, v: Vec) -> int:
        fval = u.fx * v.fy - u.fy * v.fx
        ferr = FILTER_REL * (u.mx * v.my + u.my * v.mx) + 1e-300
        return self._sign([(1, u.sx, v.sy), (-1, u.sy, v.sx)], fval, ferr)

    def dot_sign(self, u: Vec, v: Vec) -> int:
        fval = u.fx * v.fx + u.fy * v.fy
        ferr = FILTER_REL * (u.mx * v.mx + u.my * v.my) + 1e-300
        return self._sign([(1, u.sx, v.sx), (1, u.sy, v.sy)], fval, ferr)
