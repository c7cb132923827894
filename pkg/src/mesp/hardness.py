"""Instance generators for the hardness reductions.

* :func:`gen_subset_sum` turns subset-sum into a three-value min-min binary
  decision instance.  The exponentials involved are irrational, so tails are
  rounded to dyadic rationals and the decision threshold is placed inside a
  gap certified with interval arithmetic.
* :func:`gen_cnf_binary` and :func:`gen_cnf_subset` turn a CNF formula into
  gap instances (optimum below ``1/r`` iff satisfiable, at least 1
  otherwise).  These are exact rational constructions built from atoms.

CNF input uses the DIMACS format.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import interval as iv
from .errors import CertificationFailed, ParseError, ValidationError
from .model import (BinaryInstance, SubsetInstance, TailDistribution, ValueGrid,
                    as_rational)

__all__ = [
    "CnfFormula", "AtomList", "GeneratedDecision", "parse_dimacs", "to_dimacs",
    "atoms_to_tails", "gen_subset_sum", "gen_cnf_binary", "gen_cnf_subset",
    "verify_subset_sum_certificate",
]


# formulas -----------------------------------------------------------------

@dataclass(frozen=True)
class CnfFormula:
    """Clauses are tuples of nonzero ints: ``i`` is ``X_i``, ``-i`` its negation."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValidationError("a formula needs at least one variable", "BAD_FORMULA")
        clauses = tuple(tuple(sorted(set(c), key=lambda x: (abs(x), x))) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if not clauses:
            raise ValidationError("a formula needs at least one clause", "BAD_FORMULA")
        for s, clause in enumerate(clauses):
            for lit in clause:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
                    raise ValidationError(f"clause {s}: bad literal {lit!r}", "BAD_FORMULA")
                if -lit in clause:
                    raise ValidationError(
                        f"clause {s} contains both {abs(lit)} and -{abs(lit)}", "BAD_FORMULA")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment) -> bool:
        """``assignment[i-1]`` is the truth value of ``X_i``."""
        return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in clause)
                   for clause in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad problem line {raw!r}", f"line {lineno}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"bad problem line {raw!r}", f"line {lineno}") from None
            continue
        if header is None:
            raise ParseError("clause before the 'p cnf' line", f"line {lineno}")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"not an integer: {tok!r}", f"line {lineno}") from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' line")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def to_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    lines += [" ".join(map(str, clause + (0,))) for clause in formula.clauses]
    return "\n".join(lines) + "\n"


# atoms ------------------------------------------------------------------------

@dataclass(frozen=True)
class AtomList:
    """Point masses ``(weight, location)``; weights are positive and sum to 1."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((as_rational(w), as_rational(x)) for w, x in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if any(w <= 0 for w, _ in atoms):
            raise ValidationError("atom weights must be positive", "BAD_ATOM")
        if sum(w for w, _ in atoms) != 1:
            raise ValidationError("atom weights must sum to exactly 1",
                                  "WEIGHTS_DONT_SUM_TO_ONE")

    def mean(self) -> Fraction:
        return sum((w * x for w, x in self.atoms), Fraction(0))


def atoms_to_tails(atoms: AtomList, grid: ValueGrid) -> TailDistribution:
    index = {v: j for j, v in enumerate(grid.values)}
    mass = [Fraction(0)] * grid.d
    for w, x in atoms.atoms:
        if x not in index:
            raise ValidationError(f"atom location {x} is not a grid value",
                                  "LOCATION_NOT_ON_GRID")
        mass[index[x]] += w
    tails, acc = [], Fraction(0)
    for j in range(grid.d - 1, 0, -1):
        acc += mass[j]
        tails.append(acc)
    return TailDistribution(tuple(reversed(tails)))


# decisions ----------------------------------------------------------------

@dataclass(frozen=True)
class GeneratedDecision:
    """A generated instance plus the decision data that comes with it.

    Subset-sum outputs carry ``theta`` (the optimum is ``<= theta`` iff the
    subset-sum answer is yes) and an interval ``certificate``.  CNF outputs
    carry the gap pair: satisfiable implies an optimum ``<= upper_bound``
    (which is below ``1/r``), unsatisfiable implies ``>= lower_bound = 1``.
    """

    instance: object
    params: dict
    theta: Fraction = None
    upper_bound: Fraction = None
    lower_bound: Fraction = None
    certificate: dict = field(default=None)


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def _exp_floor(arg: Fraction, bits: int) -> Fraction:
    """``floor(exp(arg) * 2**bits) / 2**bits``, computed exactly."""
    if arg == 0:
        return Fraction(1)
    work = bits + 32
    while True:
        e = iv.exp(arg, work)
        lo, hi = _floor_dyadic(e.lo, bits), _floor_dyadic(e.hi, bits)
        if lo == hi:
            return lo
        work *= 2


def _exp_ceil(arg: Fraction, bits: int) -> Fraction:
    v = _exp_floor(arg, bits)
    # exp of a nonzero rational is irrational, never a dyadic
    return v if arg == 0 else v + Fraction(1, 1 << bits)


def _subset_sum_bounds(n, M, T, c, gamma, eta, work):
    """Certified ``(A_max, B_min)`` from the construction parameters."""

    def g(sigma):
        return (iv.exp(-gamma * sigma, work)
                + iv.exp(-gamma * (2 * n * M - sigma), work) * c)

    a_max = g(T).hi
    sides = [g(T + 1).lo]
    if T >= 1:
        sides.append(g(T - 1).lo)
    b_min = (1 - eta) ** n * min(sides)
    return a_max, b_min


def gen_subset_sum(z: Sequence[int], T_target: int, precision: int = 32,
                   max_retries: int = 8) -> GeneratedDecision:
    """Min-min binary instance with ``d = 3`` encoding a subset-sum question.

    With ``gamma = 1/(2 n M)`` the expectation of a selection choosing the
    set ``S`` with ``sigma = sum_{i in S} z_i`` is (before rounding)
    ``exp(-gamma sigma) + exp(gamma (sigma - 2 T))``, minimized exactly when
    ``sigma = T``.  Tails are ``exp(-gamma m)`` rounded down to ``precision``
    bits; the threshold sits strictly between a certified upper bound for any
    ``sigma = T`` selection and a certified lower bound for every other one.
    Precision doubles until the gap is certified.
    """
    z = [int(v) for v in z]
    if not z or any(v < 0 for v in z):
        raise ValidationError("need a nonempty list of nonnegative integers", "BAD_SUBSET_SUM")
    T = int(T_target)
    if T < 0:
        raise ValidationError("the target must be nonnegative", "BAD_SUBSET_SUM")
    n = len(z)
    M = max(max(z), 1)
    gamma = Fraction(1, 2 * n * M)
    bits = precision
    for _ in range(max_retries):
        c = _exp_ceil(2 * gamma * (n * M - T), bits)
        grid = ValueGrid((Fraction(0), Fraction(1), 1 + c))
        tail = {}

        def E(m):
            if m not in tail:
                tail[m] = _exp_floor(-gamma * m, bits)
            return tail[m]

        pairs = tuple(
            (TailDistribution((Fraction(1), E(2 * M))),
             TailDistribution((E(zi), E(2 * M - zi))))
            for zi in z)
        # E(m) >= exp(-gamma m) (1 - eta) since gamma m <= 1 and e < 3
        eta = Fraction(3, 1 << bits)
        a_max, b_min = _subset_sum_bounds(n, M, T, c, gamma, eta, bits + 32)
        if a_max < b_min:
            theta = (a_max + b_min) / 2
            params = dict(z=tuple(z), T_target=T, n=n, M=M, gamma=gamma, precision=bits,
                          c=c, eta=eta)
            certificate = dict(A_max=a_max, B_min=b_min, theta=theta,
                               trivially_no=T > sum(z))
            return GeneratedDecision(BinaryInstance(grid, pairs), params, theta=theta,
                                     certificate=certificate)
        bits *= 2
    raise CertificationFailed(f"gap not certified after {max_retries} precision doublings")


def verify_subset_sum_certificate(decision: GeneratedDecision, extra_bits: int = 40) -> bool:
    """Re-check a subset-sum certificate from the emitted data alone.

    Recomputes the rounded tails and the gap bounds at a different working
    precision and checks ``A_max < theta < B_min`` for both the stored and
    the recomputed bounds.
    """
    p, cert = decision.params, decision.certificate
    n, M, T, gamma, bits, c, eta = (p["n"], p["M"], p["T_target"], p["gamma"],
                                    p["precision"], p["c"], p["eta"])
    inst = decision.instance
    if inst.grid.values != (0, 1, 1 + c) or c != _exp_ceil(2 * gamma * (n * M - T), bits):
        return False
    for zi, (a, b) in zip(p["z"], inst.pairs):
        if a.tails != (1, _exp_floor(-gamma * 2 * M, bits)):
            return False
        if b.tails != (_exp_floor(-gamma * zi, bits), _exp_floor(-gamma * (2 * M - zi), bits)):
            return False
    if eta != Fraction(3, 1 << bits):
        return False
    a_max, b_min = _subset_sum_bounds(n, M, T, c, gamma, eta, bits + extra_bits)
    theta = decision.theta
    return (cert["A_max"] < theta < cert["B_min"]) and (a_max < theta < b_min)


def _contains(formula_clause, lit) -> int:
    return 1 if lit in formula_clause else 0


def _cnf_params(formula: CnfFormula, r, extra: int):
    r = as_rational(r)
    if r <= 1:
        raise ValidationError(f"the ratio r must exceed 1, got {r}", "BAD_RATIO")
    n, c = formula.num_vars, formula.num_clauses
    p = 1 / (r * (c + extra + 1))
    v = p ** -n
    return r, n, c, p, v


def _cnf_variable(formula, i, positive, p, v, gadget_n):
    """Atoms of ``Y_{i,1}`` (positive) or ``Y_{i,0}`` for variable ``i`` (1-based)."""
    c = formula.num_clauses
    lit = i if positive else -i
    atoms = [((1 - p) * p ** s, v ** (s - _contains(formula.clauses[s], lit)))
             for s in range(c)]
    # pairing gadget: coordinate c + (i - 1) is discounted for variable i only
    atoms += [((1 - p) * p ** (c + s), v ** (c + s - (1 if s == i - 1 else 0)))
              for s in range(gadget_n)]
    top = c + gadget_n
    # the top atom sits on the largest grid value v^(top-1)
    atoms.append((p ** top, v ** (top - 1)))
    return AtomList(tuple(atoms))


def gen_cnf_binary(formula: CnfFormula, r=2) -> GeneratedDecision:
    """Gap instance for min-min binary selection with ``d = c + 1`` values.

    ``p = 1/(r (c + 1))``, ``v = p**-n``; values ``v**-1, 1, v, ..., v**(c-1)``.
    """
    r, n, c, p, v = _cnf_params(formula, r, 0)
    grid = ValueGrid(tuple(v ** e for e in range(-1, c)))
    pairs = tuple(
        (atoms_to_tails(_cnf_variable(formula, i, False, p, v, 0), grid),
         atoms_to_tails(_cnf_variable(formula, i, True, p, v, 0), grid))
        for i in range(1, n + 1))
    upper = p ** n + (1 - p ** n) * c * p
    return GeneratedDecision(BinaryInstance(grid, pairs),
                             dict(r=r, p=p, v=v, n=n, c=c),
                             upper_bound=upper, lower_bound=Fraction(1))


def gen_cnf_subset(formula: CnfFormula, r=2) -> GeneratedDecision:
    """Gap instance for min-min subset selection: ``2 n`` items, ``k = n``.

    Items are ordered ``Y_{1,0}, Y_{1,1}, Y_{2,0}, ...``; ``p = 1/(r (n + c + 1))``.
    """
    r, n, c, p, v = _cnf_params(formula, r, formula.num_vars)
    grid = ValueGrid(tuple(v ** e for e in range(-1, c + n)))
    items = tuple(
        atoms_to_tails(_cnf_variable(formula, i, positive, p, v, n), grid)
        for i in range(1, n + 1) for positive in (False, True))
    upper = p ** n + (1 - p ** n) * (c + n) * p
    return GeneratedDecision(SubsetInstance(grid, items, n),
                             dict(r=r, p=p, v=v, n=n, c=c),
                             upper_bound=upper, lower_bound=Fraction(1))
