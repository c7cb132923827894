"""Value grids, tail distributions, instances and selections.

A distribution over the shared support ``l_0 < l_1 < ... < l_{d-1}`` is given
by its tails ``q_j = Pr{Y >= l_j}`` for ``j = 1..d-1`` (``q_0 = 1`` is
implicit).  With tails, the minimum of independent variables is simply the
componentwise product, and the expectation is

    E[Y] = l_0 + sum_j (l_j - l_{j-1}) * q_j.

Everything here is exact :class:`~fractions.Fraction` arithmetic.  The
log-vector view (``L_j = -ln(q_j) / gamma``) is the only place reals enter,
and it is represented by certified :class:`~mesp.interval.Interval` values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Sequence, Union

from . import interval as iv
from .errors import ValidationError
from .interval import Interval

__all__ = [
    "ValueGrid", "TailDistribution", "BinaryInstance", "SubsetInstance",
    "Selection", "LogVector", "Instance", "as_rational", "validate_grid",
    "validate_tails", "expectation", "min_combine", "selection_expectation",
    "to_log_vector", "f_eval", "negate_instance",
]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings; floats are refused."""
    if isinstance(x, bool):
        raise ValidationError(f"not a rational: {x!r}", "NOT_RATIONAL")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"not a rational: {x!r}", "NOT_RATIONAL") from None
    raise ValidationError(
        f"not a rational: {x!r} (floats are not accepted)", "NOT_RATIONAL")


@dataclass(frozen=True)
class ValueGrid:
    values: tuple

    def __post_init__(self):
        vals = tuple(as_rational(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2:
            raise ValidationError(
                f"a value grid needs d >= 2 values, got {len(vals)}", "TOO_FEW_VALUES")
        for a, b in zip(vals, vals[1:]):
            if not a < b:
                raise ValidationError(
                    f"grid values must be strictly increasing ({a} then {b})",
                    "NOT_STRICTLY_INCREASING")

    @property
    def d(self) -> int:
        return len(self.values)

    @property
    def nonnegative(self) -> bool:
        return self.values[0] >= 0

    @property
    def steps(self) -> tuple:
        """``(l_j - l_{j-1})`` for ``j = 1..d-1``."""
        v = self.values
        return tuple(v[j] - v[j - 1] for j in range(1, len(v)))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class TailDistribution:
    tails: tuple

    def __post_init__(self):
        q = tuple(as_rational(t) for t in self.tails)
        object.__setattr__(self, "tails", q)
        prev = Fraction(1)
        for j, t in enumerate(q, start=1):
            if not 0 <= t <= 1:
                raise ValidationError(f"tail q_{j} = {t} outside [0, 1]", "OUT_OF_RANGE")
            if t > prev:
                raise ValidationError(
                    f"tails must be nonincreasing (q_{j} = {t} > {prev})",
                    "NOT_NONINCREASING")
            prev = t

    @property
    def dim(self) -> int:
        return len(self.tails)

    @classmethod
    def point_mass(cls, index: int, d: int) -> TailDistribution:
        """All mass on ``l_index``."""
        return cls(tuple(Fraction(1 if j <= index else 0) for j in range(1, d)))

    def atom_weights(self) -> tuple:
        """Weights ``w_j = q_j - q_{j+1}`` for ``j = 0..d-1``."""
        q = (Fraction(1),) + self.tails + (Fraction(0),)
        return tuple(q[j] - q[j + 1] for j in range(len(q) - 1))


def validate_grid(values: Sequence) -> ValueGrid:
    return ValueGrid(tuple(values))


def validate_tails(q: Sequence, d: int) -> TailDistribution:
    if len(q) != d - 1:
        raise ValidationError(
            f"expected {d - 1} tail values for d = {d}, got {len(q)}", "WRONG_LENGTH")
    return TailDistribution(tuple(q))


def _check_dim(grid: ValueGrid, dist: TailDistribution):
    if dist.dim != grid.d - 1:
        raise ValidationError(
            f"distribution has {dist.dim} tails but the grid has d = {grid.d}",
            "DIMENSION_MISMATCH")


@dataclass(frozen=True)
class BinaryInstance:
    """Choose one distribution from each of ``n`` pairs."""

    grid: ValueGrid
    pairs: tuple

    def __post_init__(self):
        pairs = tuple(tuple(p) for p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise ValidationError("a binary instance needs n >= 1 pairs", "EMPTY_INSTANCE")
        for i, p in enumerate(pairs):
            if len(p) != 2:
                raise ValidationError(f"pair {i} does not have two options", "BAD_PAIR")
            for dist in p:
                _check_dim(self.grid, dist)

    kind = "binary"

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def distributions(self) -> tuple:
        """All 2n distributions, pair-major: ``Y_{1,0}, Y_{1,1}, Y_{2,0}, ...``."""
        return tuple(dist for p in self.pairs for dist in p)

    def selected(self, sel: Selection) -> tuple:
        check_selection(self, sel)
        return tuple(p[b] for p, b in zip(self.pairs, sel.bits))


@dataclass(frozen=True)
class SubsetInstance:
    """Choose ``k`` of ``n`` distributions."""

    grid: ValueGrid
    items: tuple
    k: int

    def __post_init__(self):
        items = tuple(self.items)
        object.__setattr__(self, "items", items)
        if isinstance(self.k, bool) or not isinstance(self.k, int):
            raise ValidationError(f"k must be an integer, got {self.k!r}", "BAD_K")
        if not 1 <= self.k <= len(items):
            raise ValidationError(
                f"need 1 <= k <= n, got k = {self.k}, n = {len(items)}", "BAD_K")
        for dist in items:
            _check_dim(self.grid, dist)

    kind = "subset"

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def distributions(self) -> tuple:
        return self.items

    def selected(self, sel: Selection) -> tuple:
        check_selection(self, sel)
        return tuple(self.items[i] for i in sel.chosen)


Instance = Union[BinaryInstance, SubsetInstance]


@dataclass(frozen=True)
class Selection:
    """Either a bit vector (binary form) or a sorted index tuple (subset form).

    Indices are 0-based.
    """

    bits: tuple = None
    chosen: tuple = None

    def __post_init__(self):
        if (self.bits is None) == (self.chosen is None):
            raise ValidationError("a selection has exactly one of bits/chosen",
                                  "INVALID_SELECTION")
        if self.bits is not None:
            bits = tuple(self.bits)
            if any(b not in (0, 1) or isinstance(b, bool) for b in bits):
                raise ValidationError(f"bits must be 0/1, got {bits}", "INVALID_SELECTION")
            object.__setattr__(self, "bits", bits)
        else:
            chosen = tuple(sorted(self.chosen))
            if len(set(chosen)) != len(chosen):
                raise ValidationError(f"duplicate indices in {chosen}", "INVALID_SELECTION")
            object.__setattr__(self, "chosen", chosen)

    @classmethod
    def binary(cls, bits) -> Selection:
        return cls(bits=tuple(bits))

    @classmethod
    def subset(cls, chosen) -> Selection:
        return cls(chosen=tuple(chosen))

    @property
    def is_binary(self) -> bool:
        return self.bits is not None

    def key(self) -> tuple:
        return self.bits if self.bits is not None else self.chosen


def check_selection(instance: Instance, sel: Selection):
    if isinstance(instance, BinaryInstance):
        if not sel.is_binary or len(sel.bits) != instance.n:
            raise ValidationError(
                f"binary instance with n = {instance.n} needs a bit vector of that length",
                "INVALID_SELECTION")
    else:
        if sel.is_binary or len(sel.chosen) != instance.k:
            raise ValidationError(
                f"subset instance needs exactly k = {instance.k} indices", "INVALID_SELECTION")
        if sel.chosen and not 0 <= sel.chosen[0] <= sel.chosen[-1] < instance.n:
            raise ValidationError(f"index out of range in {sel.chosen}", "INVALID_SELECTION")


# exact evaluation ---------------------------------------------------------

def expectation(grid: ValueGrid, dist: TailDistribution) -> Fraction:
    _check_dim(grid, dist)
    return grid.values[0] + sum(
        (s * q for s, q in zip(grid.steps, dist.tails)), Fraction(0))


def min_combine(a: TailDistribution, b: TailDistribution) -> TailDistribution:
    """Distribution of ``min(A, B)`` for independent A, B."""
    if a.dim != b.dim:
        raise ValidationError("distributions of different dimension", "DIMENSION_MISMATCH")
    return TailDistribution(tuple(x * y for x, y in zip(a.tails, b.tails)))


def selection_expectation(instance: Instance, sel: Selection) -> Fraction:
    """Exact ``E[min]`` over the selected independent variables."""
    dists = instance.selected(sel)
    return expectation(instance.grid, reduce(min_combine, dists))


# log-vector view ----------------------------------------------------------

@dataclass(frozen=True)
class LogVector:
    """Scaled negative logs ``L_j = -ln(q_j) / gamma``; ``None`` marks +inf."""

    components: tuple
    gamma: Fraction

    @property
    def dim(self) -> int:
        return len(self.components)

    def __add__(self, other: LogVector) -> LogVector:
        # min of independent variables
        if self.gamma != other.gamma or self.dim != other.dim:
            raise ValidationError("incompatible log vectors", "DIMENSION_MISMATCH")
        comps = tuple(None if a is None or b is None else a + b
                      for a, b in zip(self.components, other.components))
        return LogVector(comps, self.gamma)


def _neg_log_over_gamma(q: Fraction, gamma: Fraction, precision: int) -> Interval:
    if q == 1:
        return Interval.exact(0)
    work = precision + 8 + max(0, -_log2_floor(gamma))
    while True:
        x = -iv.log(q, work) / gamma
        x = Interval(max(x.lo, Fraction(0)), x.hi)
        tol = Fraction(1, 1 << precision) * max(Fraction(1), abs(x.lo))
        x = x.round_out(precision + 8)
        x = Interval(max(x.lo, Fraction(0)), x.hi)
        if x.width <= tol:
            return x
        work *= 2


def _log2_floor(x: Fraction) -> int:
    return x.numerator.bit_length() - x.denominator.bit_length()


def to_log_vector(dist: TailDistribution, gamma, precision: int = 64) -> LogVector:
    gamma = as_rational(gamma)
    if gamma <= 0:
        raise ValidationError(f"gamma must be positive, got {gamma}", "BAD_GAMMA")
    if precision < 16:
        raise ValidationError(f"precision must be >= 16 bits, got {precision}",
                              "BAD_PRECISION")
    comps = tuple(None if q == 0 else _neg_log_over_gamma(q, gamma, precision)
                  for q in dist.tails)
    return LogVector(comps, gamma)


def f_eval(grid: ValueGrid, L: LogVector, precision: int = 64) -> Interval:
    """Certified enclosure of ``l_0 + sum_j (l_j - l_{j-1}) exp(-gamma L_j)``."""
    if L.dim != grid.d - 1:
        raise ValidationError("log vector does not match the grid", "DIMENSION_MISMATCH")
    total = Interval.exact(grid.values[0])
    for step, comp in zip(grid.steps, L.components):
        if comp is None:
            continue
        total = total + iv.exp(-(comp * L.gamma), precision) * step
    return total


# sign flip ----------------------------------------------------------------

def _negate_dist(dist: TailDistribution) -> TailDistribution:
    # q'_j = Pr{-Y >= -l_{d-1-j}} = 1 - q_{d-j}, with q_d = 0
    q = dist.tails
    m = len(q)
    return TailDistribution(tuple(1 - q[m - j] for j in range(1, m + 1)))


def negate_instance(instance: Instance) -> Instance:
    """The instance of ``-Y``: E[max of originals] = -E[min of negated]."""
    grid = ValueGrid(tuple(-v for v in reversed(instance.grid.values)))
    if isinstance(instance, BinaryInstance):
        return BinaryInstance(grid, tuple(
            (_negate_dist(a), _negate_dist(b)) for a, b in instance.pairs))
    return SubsetInstance(grid, tuple(_negate_dist(x) for x in instance.items), instance.k)
