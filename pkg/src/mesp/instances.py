"""Seeded random instances with small-denominator rationals (tests, benchmarks)."""
from __future__ import annotations

import random
from fractions import Fraction

from .model import BinaryInstance, SubsetInstance, TailDistribution, ValueGrid


def random_grid(rng: random.Random, d: int, nonnegative: bool = True) -> ValueGrid:
    start = 0 if nonnegative else rng.randint(-5, 5)
    values, v = [], Fraction(start)
    for _ in range(d):
        values.append(v)
        v += Fraction(rng.randint(1, 9), rng.randint(1, 4))
    return ValueGrid(tuple(values))


def random_tails(rng: random.Random, d: int, allow_zero: bool = False,
                 denominator: int = 16) -> TailDistribution:
    lo = 0 if allow_zero else 1
    qs = sorted((Fraction(rng.randint(lo, denominator), denominator) for _ in range(d - 1)),
                reverse=True)
    return TailDistribution(tuple(qs))


def random_binary(seed: int, n: int, d: int = 3, nonnegative: bool = True,
                  allow_zero: bool = False) -> BinaryInstance:
    rng = random.Random(seed)
    grid = random_grid(rng, d, nonnegative)
    pairs = tuple((random_tails(rng, d, allow_zero), random_tails(rng, d, allow_zero))
                  for _ in range(n))
    return BinaryInstance(grid, pairs)


def random_subset(seed: int, n: int, k: int, d: int = 3, nonnegative: bool = True,
                  allow_zero: bool = False) -> SubsetInstance:
    rng = random.Random(seed)
    grid = random_grid(rng, d, nonnegative)
    items = tuple(random_tails(rng, d, allow_zero) for _ in range(n))
    return SubsetInstance(grid, items, k)
