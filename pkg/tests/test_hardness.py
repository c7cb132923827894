import functools
import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from mesp import io
from mesp.errors import ParseError, ValidationError
from mesp.exact import Objective, decide_threshold, solve_exact
from mesp.hardness import (AtomList, CnfFormula, atoms_to_tails, gen_cnf_binary,
                           gen_cnf_subset, gen_subset_sum, parse_dimacs, to_dimacs,
                           verify_subset_sum_certificate)
from mesp.model import Selection, expectation, min_combine, selection_expectation, validate_grid
from oracles import subset_sum, truth_table_sat


# DIMACS ---------------------------------------------------------------------------

def test_parse_dimacs():
    f = parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n2 3\n0\n")
    assert f.num_vars == 3 and f.clauses == ((1, -2), (2, 3))
    assert parse_dimacs(to_dimacs(f)) == f
    assert parse_dimacs("p cnf 1 1\n1 0\n%\n0\n").clauses == ((1,),)


@pytest.mark.parametrize("text, locus", [
    ("1 0\n", "line 1"),
    ("p cnf 2 1\n1 x 0\n", "line 2"),
    ("p cnf 2 2\n1 0\n", None),
    ("p dnf 2 1\n1 0\n", "line 1"),
])
def test_parse_dimacs_errors(text, locus):
    with pytest.raises(ParseError) as exc:
        parse_dimacs(text)
    assert exc.value.locus == locus


def test_formula_validation():
    for nv, clauses in [(0, ((1,),)), (2, ()), (2, ((1, -1),)), (2, ((3,),))]:
        with pytest.raises(ValidationError):
            CnfFormula(nv, clauses)


# atoms -----------------------------------------------------------------------------

def test_atoms_to_tails_examples():
    grid = validate_grid([F(1, 4), 1])
    assert atoms_to_tails(AtomList(((1, F(1, 4)),)), grid).tails == (0,)
    assert atoms_to_tails(AtomList(((F(3, 4), F(1, 4)), (F(1, 4), 1))), grid).tails == (F(1, 4),)
    with pytest.raises(ValidationError) as exc:
        atoms_to_tails(AtomList(((1, 2),)), grid)
    assert exc.value.code == "LOCATION_NOT_ON_GRID"
    with pytest.raises(ValidationError) as exc:
        AtomList(((F(1, 2), 0),))
    assert exc.value.code == "WEIGHTS_DONT_SUM_TO_ONE"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 9), st.integers(0, 4)), min_size=1, max_size=6))
def test_atoms_expectation_roundtrip(raw):
    total = sum(w for w, _ in raw)
    atoms = AtomList(tuple((F(w, total), loc) for w, loc in raw))
    grid = validate_grid(range(5))
    assert expectation(grid, atoms_to_tails(atoms, grid)) == atoms.mean()


# subset sum ---------------------------------------------------------------------------

@pytest.mark.parametrize("z, target, answer", [
    ((1, 2), 3, True), ((2, 2), 3, False), ((0,), 0, True), ((5, 7, 11), 30, False),
    ((3, 4, 5), 9, True), ((0, 0), 1, False)])
def test_subset_sum_generator(z, target, answer):
    dec = gen_subset_sum(z, target)
    assert dec.instance.grid.d == 3 and dec.instance.grid.values[:2] == (0, 1)
    assert decide_threshold(dec.instance, Objective.MIN_MIN, dec.theta) is answer
    assert subset_sum(z, target) is answer
    assert verify_subset_sum_certificate(dec)
    cert = dec.certificate
    assert cert["A_max"] < dec.theta < cert["B_min"]


def test_subset_sum_zero_item_has_identical_options():
    dec = gen_subset_sum([0], 0)
    a, b = dec.instance.pairs[0]
    assert a == b


def test_subset_sum_certificate_survives_serialization():
    dec = gen_subset_sum([3, 5, 6], 11)
    back, reduction = io.parse_decision(io.serialize_decision(dec, "subset-sum"))
    assert reduction == "subset-sum"
    assert verify_subset_sum_certificate(back)
    tampered = back.__class__(back.instance, back.params, theta=back.certificate["B_min"],
                              certificate=back.certificate)
    assert not verify_subset_sum_certificate(tampered)


def test_subset_sum_validation():
    with pytest.raises(ValidationError):
        gen_subset_sum([], 1)
    with pytest.raises(ValidationError):
        gen_subset_sum([1, -2], 1)


def test_low_starting_precision_is_raised_until_certified():
    dec = gen_subset_sum([7, 9, 12, 20], 28, precision=4)
    assert dec.params["precision"] > 4
    assert verify_subset_sum_certificate(dec)


# CNF gap instances ---------------------------------------------------------------------

def test_one_clause_binary_example():
    dec = gen_cnf_binary(parse_dimacs("p cnf 1 1\n1 0\n"), 2)
    assert dec.params["p"] == F(1, 4) and dec.params["v"] == 4
    inst = dec.instance
    assert inst.grid.values == (F(1, 4), 1)
    assert expectation(inst.grid, inst.pairs[0][1]) == F(7, 16)
    assert expectation(inst.grid, inst.pairs[0][0]) == 1
    assert solve_exact(inst).value == F(7, 16) == dec.upper_bound < F(1, 2)


def test_unsatisfiable_binary_example():
    dec = gen_cnf_binary(CnfFormula(1, ((1,), (-1,))), 2)
    assert solve_exact(dec.instance).value >= 1


def test_one_clause_subset_example():
    dec = gen_cnf_subset(CnfFormula(1, ((1,),)), 2)
    assert dec.params["p"] == F(1, 6) and dec.instance.k == 1
    inst = dec.instance
    good = selection_expectation(inst, Selection.subset([1]))
    bad = selection_expectation(inst, Selection.subset([0]))
    assert good < F(1, 2) <= 1 <= bad


def test_two_variable_subset_example():
    dec = gen_cnf_subset(CnfFormula(2, ((1, 2),)), 2)
    inst = dec.instance
    for chosen in itertools.combinations(range(4), 2):
        value = selection_expectation(inst, Selection.subset(chosen))
        one_per_pair = len({i // 2 for i in chosen}) == 2
        satisfying = any(i % 2 == 1 for i in chosen)
        if one_per_pair and satisfying:
            assert value <= dec.upper_bound < F(1, 2)
        else:
            assert value >= 1


def test_pairing_gadget_without_discount():
    dec = gen_cnf_subset(CnfFormula(2, ((1, 2),)), 2)
    inst, p, c, n = dec.instance, dec.params["p"], 1, 2
    # both options of variable 1: the gadget coordinate of variable 2 is not discounted
    tails = min_combine(inst.items[0], inst.items[1]).tails
    assert tails[c + 1] == (p ** (c + 1)) ** n


def _tail_identities(formula, dec, subset):
    inst, p = dec.instance, dec.params["p"]
    n, c = formula.num_vars, formula.num_clauses
    dists = inst.items if subset else [d for pair in inst.pairs for d in pair]
    for i in range(1, n + 1):
        for positive in (0, 1):
            q = dists[2 * (i - 1) + positive].tails
            lit = i if positive else -i
            for s in range(c):
                # tails[s] is Pr{Y >= v^s}: the grid starts at v^-1
                expected = p ** (s + 1) if lit in formula.clauses[s] else p ** s
                assert q[s] == expected
            if subset:
                for t in range(n):
                    s = c + t
                    assert q[s] == (p ** (s + 1) if t == i - 1 else p ** s)


@pytest.mark.parametrize("seed", range(20))
def test_tail_identities_random(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    clauses = []
    for _ in range(rng.randint(1, 3)):
        vars_ = rng.sample(range(1, n + 1), rng.randint(1, n))
        clauses.append(tuple(v if rng.random() < .5 else -v for v in vars_))
    f = CnfFormula(n, tuple(clauses))
    _tail_identities(f, gen_cnf_binary(f, 2), False)
    _tail_identities(f, gen_cnf_subset(f, 2), True)


def test_gap_on_small_formulas():
    rng = random.Random(99)
    for _ in range(30):
        n = rng.randint(1, 3)
        clauses = tuple(tuple(v if rng.random() < .5 else -v
                              for v in rng.sample(range(1, n + 1), rng.randint(1, n)))
                        for _ in range(rng.randint(1, 3)))
        f = CnfFormula(n, clauses)
        sat = truth_table_sat(n, clauses)
        for gen in (gen_cnf_binary, gen_cnf_subset):
            dec = gen(f, 2)
            opt = solve_exact(dec.instance).value
            assert (opt < F(1, 2)) is sat
            if sat:
                assert opt <= dec.upper_bound
            else:
                assert opt >= dec.lower_bound == 1


def test_ratio_validation():
    with pytest.raises(ValidationError):
        gen_cnf_binary(CnfFormula(1, ((1,),)), 1)


@pytest.mark.parametrize("seed", range(10))
def test_product_law_per_clause(seed):
    rng = random.Random(1000 + seed)
    n = rng.randint(1, 3)
    clauses = tuple(tuple(v if rng.random() < .5 else -v
                          for v in rng.sample(range(1, n + 1), rng.randint(1, n)))
                    for _ in range(rng.randint(1, 4)))
    f = CnfFormula(n, clauses)
    dec = gen_cnf_binary(f, 2)
    p = dec.params["p"]
    for bits in itertools.product((0, 1), repeat=n):
        tails = functools.reduce(min_combine, dec.instance.selected(Selection.binary(bits))).tails
        for s, clause in enumerate(clauses):
            lits = {i + 1 if b else -(i + 1) for i, b in enumerate(bits)}
            if lits.isdisjoint(clause):
                assert tails[s] == p ** (s * n)
            else:
                assert tails[s] <= p ** (s * n + 1)
