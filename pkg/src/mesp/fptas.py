"""Approximation scheme for min-min selection with a fixed number of values.

Every tail is mapped to its scaled negative log ``x = -ln(q) / gamma`` with
``gamma = epsilon / (6 n)`` and rounded down to an integer in ``[x - 2, x]``.
A reachability table over integer tuples then records which rounded sums are
achievable; ``T + 1`` stands for an infinite component (a zero tail).  The
tuple minimizing ``f`` identifies a selection within a factor ``1 + epsilon``
of the optimum when ``l_0 >= 0``.

The table is stored sparsely, one sorted array of encoded tuples per stage,
with a back pointer to the first predecessor that produced each tuple.  The
stage transition is the hot loop (see :mod:`mesp.kernels`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import interval as iv
from . import kernels
from .errors import PrecisionInsufficient, ValidationError
from .exact import IntegerScorer
from .interval import Interval
from .model import (BinaryInstance, Instance, Selection, SubsetInstance,
                    _neg_log_over_gamma, as_rational)

__all__ = [
    "FptasConfig", "RoundedVector", "DpTable", "FptasResult", "compute_T",
    "round_vectors", "build_table", "dp_min_min_binary", "dp_min_min_subset",
    "dp_min_min",
]


@dataclass(frozen=True)
class FptasConfig:
    epsilon: Fraction
    log_precision: int = 64

    def __post_init__(self):
        eps = as_rational(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 < eps <= 1:
            raise ValidationError(f"epsilon must lie in (0, 1], got {eps}", "BAD_EPSILON")
        if self.log_precision < 16:
            raise ValidationError("log_precision must be >= 16 bits", "BAD_PRECISION")

    def gamma(self, n: int) -> Fraction:
        return self.epsilon / (6 * n)


@dataclass(frozen=True)
class RoundedVector:
    """Integer log components; the value ``T + 1`` encodes +inf."""

    components: tuple
    T: int

    def is_infinite(self, j: int) -> bool:
        return self.components[j] == self.T + 1


def _require_nonnegative(instance: Instance):
    if not instance.grid.nonnegative:
        raise ValidationError(
            f"approximation needs nonnegative values (l_0 >= 0), got l_0 = "
            f"{instance.grid.values[0]}", "GRID_NEGATIVE")


def compute_T(instance: Instance, gamma, precision: int = 64) -> int:
    """Integer ``T`` certified to lie in ``[ln(1/p*)/gamma, ln(1/p*)/gamma + 2]``.

    ``p*`` is the product of all nonzero tail probabilities of the input.
    """
    gamma = as_rational(gamma)
    p_star = Fraction(1)
    for dist in instance.distributions:
        for q in dist.tails:
            if q:
                p_star *= q
    if p_star == 1:
        return 0
    lam = -iv.log(p_star, precision) / gamma
    T = math.ceil(lam.hi)
    if not T <= lam.lo + 2:
        raise PrecisionInsufficient(
            f"{precision} bits cannot bracket ln(1/p*)/gamma within a unit; retry with more")
    return T


def _round_component(q: Fraction, gamma: Fraction, precision: int, T: int) -> int:
    if q == 0:
        return T + 1
    if q == 1:
        return 0
    x = _neg_log_over_gamma(q, gamma, precision)
    if x.width > 1:
        raise PrecisionInsufficient(
            f"log of {q} is not known to within 1/2 at {precision} bits")
    return max(0, math.floor(x.mid - Fraction(1, 2)))


def round_vectors(instance: Instance, config: FptasConfig, T: int = None) -> list:
    """Rounded log vectors of all distributions, in ``instance.distributions`` order."""
    _require_nonnegative(instance)
    gamma = config.gamma(instance.n)
    if T is None:
        T = compute_T(instance, gamma, config.log_precision)
    return [RoundedVector(tuple(_round_component(q, gamma, config.log_precision, T)
                                for q in dist.tails), T)
            for dist in instance.distributions]


@dataclass
class DpTable:
    """Sparse reachability table.

    ``stages[s]`` is ``(keys, parent, choice)`` after deciding the first
    ``s`` pairs/items; each key encodes a tuple ``(L_1, ..., L_m)`` (plus the
    count of chosen items in the subset variant) in base ``T + 2``.
    """

    T: int
    ndims: int
    max_count: int  # -1 for the binary variant
    stages: list = field(default_factory=list)

    @property
    def base(self) -> int:
        return self.T + 2

    def encode(self, comps, count: int = 0) -> int:
        key = count
        for c in reversed(comps):
            key = key * self.base + c
        return key

    def decode(self, key: int):
        comps = []
        for _ in range(self.ndims):
            key, c = divmod(int(key), self.base)
            comps.append(c)
        return tuple(comps), key

    def reachable(self, s: int, comps, count: int = 0) -> bool:
        keys = self.stages[s][0]
        key = self.encode(comps, count)
        lo, hi = 0, len(keys)
        while lo < hi:
            mid = (lo + hi) // 2
            if keys[mid] < key:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(keys) and keys[lo] == key

    @property
    def entries(self) -> int:
        """Size of the equivalent dense table (all stages, all index tuples)."""
        counts = self.max_count + 1 if self.max_count >= 0 else 1
        return len(self.stages) * self.base ** self.ndims * counts

    @property
    def reachable_states(self) -> int:
        return sum(len(st[0]) for st in self.stages)

    def path(self, s: int, idx: int) -> list:
        """Option choices leading to entry ``idx`` of stage ``s``."""
        choices = []
        while s > 0:
            _, parent, choice = self.stages[s]
            choices.append(int(choice[idx]))
            idx = int(parent[idx])
            s -= 1
        choices.reverse()
        return choices


def _stage_options(instance: Instance, rounded: list):
    m = len(rounded[0].components)
    if isinstance(instance, BinaryInstance):
        for i in range(instance.n):
            yield [rounded[2 * i].components, rounded[2 * i + 1].components], [0, 0]
    else:
        zero = (0,) * m
        for vec in rounded:
            yield [zero, vec.components], [0, 1]


def build_table(instance: Instance, rounded: list) -> DpTable:
    T = rounded[0].T
    ndims = len(rounded[0].components)
    max_count = instance.k if isinstance(instance, SubsetInstance) else -1
    table = DpTable(T, ndims, max_count)
    table.stages.append(([0], [0], [0]))
    for options, counts in _stage_options(instance, rounded):
        keys = table.stages[-1][0]
        table.stages.append(kernels.advance_stage(keys, options, counts, table.base, T,
                                                  max_count))
    return table


@dataclass(frozen=True)
class FptasResult:
    selection: Selection
    bound: Interval
    exact_value: Fraction
    epsilon: Fraction
    gamma: Fraction
    T: int
    table_entries: int
    reachable_states: int
    candidates_scored: int

    def __iter__(self):
        return iter((self.selection, self.bound, self.exact_value))

    @property
    def ratio_bound(self) -> Fraction:
        return 1 + self.epsilon


class _FEvaluator:
    """``f`` at integer log tuples, with ``T + 1`` mapped to +inf."""

    def __init__(self, grid, gamma, T, precision):
        self.l0 = grid.values[0]
        self.steps = grid.steps
        self.gamma = gamma
        self.T = T
        self.precision = precision
        self._cache = {}

    def term(self, L: int) -> Interval:
        val = self._cache.get(L)
        if val is None:
            val = iv.exp(-self.gamma * L, self.precision).round_out(self.precision)
            self._cache[L] = val
        return val

    def __call__(self, comps) -> Interval:
        total = Interval.exact(self.l0)
        for step, L in zip(self.steps, comps):
            if L <= self.T:
                total = total + self.term(L) * step
        return total


def _solve(instance: Instance, config: FptasConfig) -> FptasResult:
    _require_nonnegative(instance)
    gamma = config.gamma(instance.n)
    rounded = round_vectors(instance, config)
    table = build_table(instance, rounded)
    T = table.T
    subset = isinstance(instance, SubsetInstance)
    n_summed = instance.k if subset else instance.n

    final_keys, _, _ = table.stages[-1]
    f = _FEvaluator(instance.grid, gamma, T, config.log_precision)
    values = {}
    for key in final_keys:
        comps, count = table.decode(key)
        if subset and count != instance.k:
            continue
        values[int(key)] = (f(comps), comps)
    best_hi = min(v.hi for v, _ in values.values())
    # any selection beating the minimizing tuple rounds to a tuple below this cutoff
    cutoff = best_hi * iv.exp(2 * n_summed * gamma, config.log_precision).hi
    shortlist = {key for key, (v, _) in values.items() if v.lo <= cutoff}

    # expand the last stage: every (parent, option) landing on a shortlisted tuple
    last = len(table.stages) - 1
    prev_keys = table.stages[last - 1][0]
    options, counts = list(_stage_options(instance, rounded))[-1]
    sat = T + 1
    candidates = []
    for p, key in enumerate(prev_keys):
        comps, cnt = table.decode(key)
        for o, vec in enumerate(options):
            child_cnt = cnt + counts[o]
            child = table.encode([min(a + b, sat) for a, b in zip(comps, vec)], child_cnt)
            if child in shortlist:
                candidates.append((child, table.path(last - 1, p) + [o]))

    scorer = IntegerScorer(instance.grid, instance.distributions)
    best = None
    for child, choices in candidates:
        if subset:
            chosen = [i for i, c in enumerate(choices) if c]
            score = scorer.score(chosen)
            sel = Selection.subset(chosen)
        else:
            score = scorer.score([2 * i + b for i, b in enumerate(choices)])
            sel = Selection.binary(choices)
        # minimize the exact value; ties by tuple, then by choices
        rank = (score, values[child][1], tuple(choices))
        if best is None or rank < best[0]:
            best = (rank, sel, child)
    (score, _, _), sel, child = best
    return FptasResult(
        selection=sel,
        bound=values[child][0],
        exact_value=scorer.value(score, n_summed),
        epsilon=config.epsilon,
        gamma=gamma,
        T=T,
        table_entries=table.entries,
        reachable_states=table.reachable_states,
        candidates_scored=len(candidates),
    )


def dp_min_min_binary(instance: BinaryInstance, config: FptasConfig) -> FptasResult:
    if not isinstance(instance, BinaryInstance):
        raise ValidationError("expected a binary instance", "WRONG_KIND")
    return _solve(instance, config)


def dp_min_min_subset(instance: SubsetInstance, config: FptasConfig) -> FptasResult:
    if not isinstance(instance, SubsetInstance):
        raise ValidationError("expected a subset instance", "WRONG_KIND")
    return _solve(instance, config)


def dp_min_min(instance: Instance, config: FptasConfig) -> FptasResult:
    return _solve(instance, config)
