"""Exact max-min selection for three support values.

With ``gamma = 1`` each distribution is a point ``(-ln q_1, -ln q_2)`` in the
plane and the expectation of a selection is a convex function of the sum of
its points.  The maximum over all selections is therefore attained at a
vertex of the convex hull of the achievable sums:

* binary variant: the zonotope ``sum_i [P_{i,0}, P_{i,1}]``; the vertex
  maximizing direction ``w`` takes option 1 exactly where ``w . g_i > 0``
  for the generator ``g_i = P_{i,1} - P_{i,0}``;
* subset variant: the zonotope sliced by ``sum alpha_i = k``, whose vertex in
  direction ``w`` is the set of ``k`` points with the largest ``w . P_i``.

Both label sets only change at critical directions ``w`` orthogonal to a
generator (or to a difference ``P_i - P_j``).  We visit every critical
direction and emit the labels just before and just after it: ties at ``w``
itself are broken by the rotated direction, and identical points by index.
All orientation tests are exact (:mod:`mesp.planar`), so the candidates are
precisely the vertex labels; the answer comes from exact rational scoring.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import planar
from .errors import DimensionUnsupported, ZeroProbabilityUnhandled
from .exact import (BINARY_BUDGET, SUBSET_BUDGET, IntegerScorer, Objective, SolveResult,
                    solve_binary_exact, solve_subset_exact)
from .model import BinaryInstance, Selection, SubsetInstance, selection_expectation
from .planar import LogField

__all__ = ["LabeledPoint", "minkowski_vertices", "topk_sweep_candidates",
           "solve_maxmin_binary", "solve_maxmin_subset"]


@dataclass(frozen=True)
class LabeledPoint:
    coords: tuple  # (Interval, Interval)
    label: tuple


def _as_vec(field, p):
    if isinstance(p, planar.Vec):
        return p
    if len(p) != 2:
        raise DimensionUnsupported(f"only planar points are supported, got dimension {len(p)}")
    return field.rational_point(p)


def _float_arrays(vecs):
    cols = np.array([(v.fx, v.fy, v.mx, v.my) for v in vecs], dtype=float).reshape(-1, 4)
    return cols[:, 0], cols[:, 1], cols[:, 2], cols[:, 3]


def minkowski_vertices(segments, field: LogField = None, precision: int = 64) -> list:
    """Vertices of the zonotope ``sum_i [a_i, b_i]``, labelled by endpoint choice.

    Endpoints are pairs of rationals, or :class:`planar.Vec` points of
    ``field``.  Each result carries the label ``s`` (one bit per segment) and
    interval coordinates of ``sum_i (b_i if s_i else a_i)``.
    """
    field = field if field is not None else LogField()
    segs = [(_as_vec(field, a), _as_vec(field, b)) for a, b in segments]
    n = len(segs)
    gens = [planar.sub(b, a) for a, b in segs]
    active = [i for i in range(n) if not planar.is_zero(gens[i])]
    labels = set()
    if not active:
        labels.add((0,) * n)
    gx, gy, gmx, gmy = _float_arrays(gens) if gens else (None,) * 4
    for i in active:
        g = gens[i]
        cross = g.fx * gy - g.fy * gx
        err = planar.FILTER_REL * (g.mx * gmy + g.my * gmx) + 1e-300
        fixed = np.where(cross > err, 1, np.where(cross < -err, -1, 0))
        exact = {}
        for j in active:
            if fixed[j] == 0:
                c = field.cross_sign(g, gens[j])
                # parallel generators switch together with g, on the rotated side
                exact[j] = (c, field.dot_sign(g, gens[j]) if c == 0 else 0)
        for orient in (1, -1):
            for side in (1, -1):
                label = [0] * n
                for j in active:
                    c, t = exact.get(j, (int(fixed[j]), 0))
                    # w = orient * perp(g); the rotated direction is -orient * g
                    s = orient * c if c else -orient * side * t
                    label[j] = 1 if s > 0 else 0
                labels.add(tuple(label))
    out = []
    for label in sorted(labels):
        total = field.vec({}, {})
        for i, s in enumerate(label):
            total = planar.add(total, segs[i][s])
        out.append(LabeledPoint((field.interval(total.sx, precision),
                                 field.interval(total.sy, precision)), label))
    return out


def topk_sweep_candidates(points, k: int, field: LogField = None) -> set:
    """Every set of ``k`` indices that is the top ``k`` by ``w . P_i`` for a generic ``w``.

    Points are pairs of rationals or :class:`planar.Vec` points of ``field``.
    Identical points are ranked by index, so only the lowest-indexed members
    of a group of twins are ever preferred.
    """
    field = field if field is not None else LogField()
    pts = [_as_vec(field, p) for p in points]
    n = len(pts)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k = {k}, n = {n}")
    if k == n:
        return {tuple(range(n))}
    X, Y, MX, MY = _float_arrays(pts)
    result = set()
    for a in range(n):
        for b in range(a + 1, n):
            D = planar.sub(pts[a], pts[b])
            if planar.is_zero(D):
                continue
            for orient in (1, -1):
                result.update(_topk_at(field, pts, k, D, orient, X, Y, MX, MY))
    if not result:  # all points identical
        result.add(tuple(range(k)))
    return result


def _topk_at(field, pts, k, D, orient, X, Y, MX, MY):
    """Top-k sets just before and after the direction ``orient * perp(D)``."""
    n = len(pts)
    s = orient * (D.fx * Y - D.fy * X)
    err = planar.FILTER_REL * (D.mx * MY + D.my * MX) + 1e-300
    lo, hi = s - err, s + err
    sorted_lo, sorted_hi = np.sort(lo), np.sort(hi)
    # items that may rank at or above i (i itself included), items surely above i
    may_above = n - np.searchsorted(sorted_hi, lo, side="left")
    surely_above = n - np.searchsorted(sorted_lo, hi, side="right")
    inside = [i for i in range(n) if may_above[i] - 1 < k]
    band = [i for i in range(n) if may_above[i] - 1 >= k and surely_above[i] < k]
    need = k - len(inside)
    if need == 0 or len(band) == need:
        yield tuple(sorted(inside + band))
        return
    for side in (1, -1):
        def cmp(l, m, side=side):
            E = planar.sub(pts[l], pts[m])
            p = orient * field.cross_sign(D, E)
            if p:
                return -p
            t = -orient * side * field.dot_sign(D, E)
            if t:
                return -t
            return l - m
        ranked = sorted(band, key=functools.cmp_to_key(cmp))
        yield tuple(sorted(inside + ranked[:need]))


# solvers --------------------------------------------------------------------

def _require_d3(instance):
    if instance.grid.d != 3:
        raise DimensionUnsupported(
            f"the geometric max-min solver handles d = 3 only (got d = {instance.grid.d}); "
            "use the exact solver instead")


def _best_of(scorer, labelled, m):
    """Maximize the exact score; ties go to the smallest label."""
    best_score, best_key, count = None, None, 0
    for key, idx in labelled:
        s = scorer.score(idx)
        if best_score is None or s > best_score:
            best_score, best_key, count = s, key, 1
        elif s == best_score:
            count += 1
            best_key = min(best_key, key)
    return best_key, scorer.value(best_score, m), count


def _zero_fallback(solver, instance, budget, size):
    if size > budget:
        raise ZeroProbabilityUnhandled(
            "a zero tail breaks the log-space geometry and the instance is too large "
            "for exhaustive search")
    warnings.warn("zero tail probability: solving by exhaustive enumeration", RuntimeWarning)
    return solver(instance, Objective.MAX_MIN, budget)


def solve_maxmin_binary(instance: BinaryInstance, precision: int = 64,
                        budget: int = BINARY_BUDGET) -> SolveResult:
    """Exact max-min optimum of a binary instance with d = 3.

    ``optima_count`` counts the optimal labels among the scored candidates.
    """
    _require_d3(instance)
    n = instance.n
    # a coordinate where some pair has no positive option is 0 for every selection
    alive = 2
    for j in (0, 1):
        if any(a.tails[j] == 0 and b.tails[j] == 0 for a, b in instance.pairs):
            alive = j
            break
    if alive == 0:
        sel = Selection.binary((0,) * n)
        return SolveResult(sel, instance.grid.values[0], 2 ** n)
    if alive == 1:
        bits, count = [], 1
        for a, b in instance.pairs:
            bits.append(1 if b.tails[0] > a.tails[0] else 0)
            count *= 2 if a.tails[0] == b.tails[0] else 1
        sel = Selection.binary(bits)
        return SolveResult(sel, selection_expectation(instance, sel), count)
    if any(q == 0 for dist in instance.distributions for q in dist.tails):
        return _zero_fallback(solve_binary_exact, instance, budget, 2 ** n)

    field = LogField.for_tails(instance.distributions)
    segments = [(field.log_point(a.tails), field.log_point(b.tails)) for a, b in instance.pairs]
    candidates = minkowski_vertices(segments, field, precision)
    scorer = IntegerScorer(instance.grid, instance.distributions)
    labelled = [(lp.label, [2 * i + s for i, s in enumerate(lp.label)]) for lp in candidates]
    bits, value, count = _best_of(scorer, labelled, n)
    return SolveResult(Selection.binary(bits), value, count)


def solve_maxmin_subset(instance: SubsetInstance,
                        budget: int = SUBSET_BUDGET) -> SolveResult:
    """Exact max-min optimum of a subset instance with d = 3.

    ``optima_count`` counts the optimal k-subsets among the scored candidates.
    """
    _require_d3(instance)
    n, k = instance.n, instance.k
    alive = 2
    for j in (0, 1):
        if sum(1 for x in instance.items if x.tails[j] == 0) > n - k:
            alive = j
            break
    if alive == 0:
        return SolveResult(Selection.subset(range(k)), instance.grid.values[0],
                           math.comb(n, k))
    if alive == 1:
        order = sorted(range(n), key=lambda i: (-instance.items[i].tails[0], i))
        chosen = order[:k]
        edge = instance.items[chosen[-1]].tails[0]
        ties = sum(1 for x in instance.items if x.tails[0] == edge)
        need = sum(1 for i in chosen if instance.items[i].tails[0] == edge)
        sel = Selection.subset(chosen)
        return SolveResult(sel, selection_expectation(instance, sel), math.comb(ties, need))
    if any(q == 0 for x in instance.items for q in x.tails):
        return _zero_fallback(solve_subset_exact, instance, budget, math.comb(n, k))

    field = LogField.for_tails(instance.items)
    points = [field.log_point(x.tails) for x in instance.items]
    candidates = topk_sweep_candidates(points, k, field)
    scorer = IntegerScorer(instance.grid, instance.items)
    chosen, value, count = _best_of(scorer, [(c, c) for c in candidates], k)
    return SolveResult(Selection.subset(chosen), value, count)
