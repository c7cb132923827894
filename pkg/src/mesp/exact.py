"""Exhaustive exact optimizers and the joint-outcome oracle.

These are the ground truth for the approximation and geometric solvers, so
they stay deliberately simple: plain enumeration, exact rationals, explicit
budgets.  The enumeration works on integers: every tail is rescaled to a
common denominator ``D``, so all selections of the same size share the
denominator ``D**m`` and can be ranked by a single integer score.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceeded, ValidationError
from .model import (BinaryInstance, Instance, Selection, SubsetInstance,
                    TailDistribution, ValueGrid, negate_instance)

__all__ = [
    "Objective", "SolveResult", "IntegerScorer", "solve_binary_exact",
    "solve_subset_exact", "solve_exact", "joint_outcome_oracle", "decide_threshold",
    "BINARY_BUDGET", "SUBSET_BUDGET", "ORACLE_BUDGET",
]

BINARY_BUDGET = 1 << 24
SUBSET_BUDGET = 10 ** 7
ORACLE_BUDGET = 10 ** 6


class Objective(enum.Enum):
    MIN_MIN = "min-min"
    MAX_MIN = "max-min"
    MIN_MAX = "min-max"
    MAX_MAX = "max-max"

    @property
    def maximize(self) -> bool:
        return self in (Objective.MAX_MIN, Objective.MAX_MAX)

    @property
    def of_max(self) -> bool:
        """True for objectives on E[max] (solved through the negated instance)."""
        return self in (Objective.MIN_MAX, Objective.MAX_MAX)

    @property
    def dual(self) -> Objective:
        """The E[min] objective solving this one on the negated instance."""
        return {Objective.MIN_MAX: Objective.MAX_MIN,
                Objective.MAX_MAX: Objective.MIN_MIN}.get(self, self)


@dataclass(frozen=True)
class SolveResult:
    selection: Selection
    value: Fraction
    optima_count: int


class IntegerScorer:
    """Rank selections of a fixed size by an exact integer score.

    With common tail denominator ``D`` and step denominator ``E``,

        E[min over m selected] = l_0 + score / (E * D**m),
        score = sum_j step_num_j * prod_i tail_num_{i,j}.
    """

    def __init__(self, grid: ValueGrid, dists: Sequence[TailDistribution]):
        self.grid = grid
        self.D = math.lcm(1, *(q.denominator for dist in dists for q in dist.tails))
        steps = grid.steps
        self.E = math.lcm(*(s.denominator for s in steps))
        self.step_nums = tuple(s.numerator * (self.E // s.denominator) for s in steps)
        self.nums = [tuple(q.numerator * (self.D // q.denominator) for q in dist.tails)
                     for dist in dists]

    def score(self, indices) -> int:
        prods = [1] * len(self.step_nums)
        for i in indices:
            prods = [a * b for a, b in zip(prods, self.nums[i])]
        return self.combine(prods)

    def combine(self, prods) -> int:
        return sum(s * p for s, p in zip(self.step_nums, prods))

    def value(self, score: int, m: int) -> Fraction:
        return self.grid.values[0] + Fraction(score, self.E * self.D ** m)


def _better(score, best, maximize):
    return score > best if maximize else score < best


def _enumerate_binary(instance: BinaryInstance, maximize: bool):
    scorer = IntegerScorer(instance.grid, instance.distributions)
    n, dim = instance.n, instance.grid.d - 1
    nums = scorer.nums
    best = None
    best_bits = None
    count = 0
    bits = [0] * n

    # depth-first over bit strings in lexicographic order, carrying prefix products
    def walk(i, prods):
        nonlocal best, best_bits, count
        if i == n:
            s = scorer.combine(prods)
            if best is None or _better(s, best, maximize):
                best, best_bits, count = s, tuple(bits), 1
            elif s == best:
                count += 1
            return
        for b in (0, 1):
            bits[i] = b
            row = nums[2 * i + b]
            walk(i + 1, [p * r for p, r in zip(prods, row)])

    walk(0, [1] * dim)
    return SolveResult(Selection.binary(best_bits), scorer.value(best, n), count)


def _enumerate_subset(instance: SubsetInstance, maximize: bool):
    scorer = IntegerScorer(instance.grid, instance.items)
    n, k, dim = instance.n, instance.k, instance.grid.d - 1
    nums = scorer.nums
    best = None
    best_set = None
    count = 0
    chosen = []

    # combinations in lexicographic order, carrying prefix products
    def walk(start, prods):
        nonlocal best, best_set, count
        if len(chosen) == k:
            s = scorer.combine(prods)
            if best is None or _better(s, best, maximize):
                best, best_set, count = s, tuple(chosen), 1
            elif s == best:
                count += 1
            return
        for i in range(start, n - (k - len(chosen)) + 1):
            chosen.append(i)
            walk(i + 1, [p * r for p, r in zip(prods, nums[i])])
            chosen.pop()

    walk(0, [1] * dim)
    return SolveResult(Selection.subset(best_set), scorer.value(best, k), count)


def _dualize(solver, instance, obj):
    if obj.of_max:
        res = solver(negate_instance(instance), obj.dual.maximize)
        return SolveResult(res.selection, -res.value, res.optima_count)
    return solver(instance, obj.maximize)


def solve_binary_exact(instance: BinaryInstance, obj: Objective = Objective.MIN_MIN,
                       budget: int = BINARY_BUDGET) -> SolveResult:
    """Exact optimum over all ``2**n`` selections.

    Ties go to the lexicographically smallest bit string.
    """
    if not isinstance(instance, BinaryInstance):
        raise ValidationError("expected a binary instance", "WRONG_KIND")
    if 2 ** instance.n > budget:
        raise BudgetExceeded(f"2^{instance.n} selections exceed the budget of {budget}")
    return _dualize(_enumerate_binary, instance, Objective(obj))


def solve_subset_exact(instance: SubsetInstance, obj: Objective = Objective.MIN_MIN,
                       budget: int = SUBSET_BUDGET) -> SolveResult:
    """Exact optimum over all k-subsets; ties go to the smallest sorted index tuple."""
    if not isinstance(instance, SubsetInstance):
        raise ValidationError("expected a subset instance", "WRONG_KIND")
    total = math.comb(instance.n, instance.k)
    if total > budget:
        raise BudgetExceeded(f"C({instance.n},{instance.k}) = {total} subsets exceed "
                             f"the budget of {budget}")
    return _dualize(_enumerate_subset, instance, Objective(obj))


def solve_exact(instance: Instance, obj: Objective = Objective.MIN_MIN) -> SolveResult:
    if isinstance(instance, BinaryInstance):
        return solve_binary_exact(instance, obj)
    return solve_subset_exact(instance, obj)


def joint_outcome_oracle(grid: ValueGrid, dists: Sequence[TailDistribution],
                         aggregate: str = "min", budget: int = ORACLE_BUDGET) -> Fraction:
    """E[min] (or E[max]) by summing over all ``d**n`` joint outcomes.

    Independent of the tail-product shortcut on purpose.
    """
    if aggregate not in ("min", "max"):
        raise ValidationError(f"aggregate must be 'min' or 'max', got {aggregate!r}",
                              "BAD_AGGREGATE")
    agg = min if aggregate == "min" else max
    d = grid.d
    for dist in dists:
        if dist.dim != d - 1:
            raise ValidationError("distribution does not match the grid",
                                  "DIMENSION_MISMATCH")
    if d ** len(dists) > budget:
        raise BudgetExceeded(f"{d}^{len(dists)} joint outcomes exceed the budget of {budget}")
    weights = [dist.atom_weights() for dist in dists]
    total = Fraction(0)
    for outcome in itertools.product(range(d), repeat=len(dists)):
        w = Fraction(1)
        for ws, j in zip(weights, outcome):
            w *= ws[j]
            if not w:
                break
        if w:
            total += w * grid.values[agg(outcome)]
    return total


def decide_threshold(instance: Instance, obj: Objective, theta) -> bool:
    """Is the optimum ``<= theta`` (minimizing) or ``>= theta`` (maximizing)?"""
    obj = Objective(obj)
    value = solve_exact(instance, obj).value
    theta = Fraction(theta)
    return value >= theta if obj.maximize else value <= theta
