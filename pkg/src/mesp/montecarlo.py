"""Sampling check of selection expectations.

Draws come from numpy's PCG64 bit generator seeded through ``SeedSequence``
(the raw 64-bit outputs, not the distribution methods, so the stream is fixed
by the published algorithm).  A draw ``u = raw >> 11`` is a 53-bit integer and
lands at or above ``l_j`` iff ``u < ceil(q_j * 2**53)``, which reproduces the
tails exactly up to the 2**-53 grid.  Statistics are accumulated as exact
counts, so reports are bit-identical for a given seed.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

import numpy as np

from . import kernels
from .model import Selection, selection_expectation

PRNG_NAME = "PCG64(SeedSequence(seed)).random_raw >> 11"
_SCALE = 1 << 53
_CHUNK = 1 << 16


def sample_variable(grid, dist, u) -> Fraction:
    """Inverse-CDF draw: ``l_j`` for the largest ``j`` with ``q_j > u``."""
    u = Fraction(u)
    j = 0
    for q in dist.tails:
        if q > u:
            j += 1
        else:
            break
    return grid.values[j]


def _decimal(x: Fraction, digits: int = 12) -> Decimal:
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    return ctx.divide(Decimal(x.numerator), Decimal(x.denominator))


@dataclass(frozen=True)
class TrialReport:
    mean: Decimal
    stderr: Decimal
    trials: int
    seed: int
    exact_reference: Fraction
    counts: tuple  # trials whose minimum landed on each grid value
    mean_exact: Fraction
    variance: Fraction  # unbiased sample variance, exact

    def agrees(self, sigmas: int = 4) -> bool:
        """``|mean - exact| <= sigmas * stderr``, decided in exact arithmetic."""
        diff = self.mean_exact - self.exact_reference
        return diff * diff <= sigmas * sigmas * self.variance / self.trials

    def to_obj(self) -> dict:
        return {"format": "mesp-trials-v1", "mean": str(self.mean),
                "stderr": str(self.stderr), "trials": self.trials, "seed": self.seed,
                "prng": PRNG_NAME,
                "exact_reference": None if self.exact_reference is None
                else str(self.exact_reference),
                "counts": list(self.counts)}


def monte_carlo_estimate(instance, sel: Selection, trials: int, seed: int) -> TrialReport:
    if trials < 2:
        raise ValueError("need at least two trials")
    if not 0 <= seed < 1 << 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    dists = instance.selected(sel)
    grid = instance.grid
    thresholds = np.array([[math.ceil(q * _SCALE) for q in dist.tails] for dist in dists],
                          dtype=np.int64)
    bitgen = np.random.PCG64(seed)
    counts = [0] * grid.d
    done = 0
    while done < trials:
        m = min(_CHUNK, trials - done)
        raw = bitgen.random_raw(size=(m, len(dists)))
        for j, c in enumerate(kernels.min_index_counts(raw, thresholds, grid.d)):
            counts[j] += c
        done += m
    mean = sum((c * v for c, v in zip(counts, grid.values)), Fraction(0)) / trials
    ss = sum((c * (v - mean) ** 2 for c, v in zip(counts, grid.values)), Fraction(0))
    variance = ss / (trials - 1)
    ctx = decimal.Context(prec=12, rounding=decimal.ROUND_HALF_EVEN)
    se2 = variance / trials
    stderr = ctx.sqrt(decimal.Context(prec=60).divide(Decimal(se2.numerator),
                                                      Decimal(se2.denominator)))
    return TrialReport(_decimal(mean), stderr, trials, seed,
                       selection_expectation(instance, sel), tuple(counts), mean, variance)
