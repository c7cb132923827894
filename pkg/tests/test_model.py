from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from mesp.errors import ValidationError
from mesp.exact import joint_outcome_oracle
from mesp.instances import random_binary
from mesp.model import (BinaryInstance, LogVector, Selection, SubsetInstance, TailDistribution,
                        ValueGrid, expectation, f_eval, min_combine, negate_instance,
                        selection_expectation, to_log_vector, validate_grid, validate_tails)
from oracles import all_selections, joint_expectation, neg_log_over_gamma, tails_of

G013 = validate_grid([0, 1, 3])


@st.composite
def tail_lists(draw, d):
    qs = draw(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=12),
                       min_size=d - 1, max_size=d - 1))
    return TailDistribution(tuple(sorted(qs, reverse=True)))


@st.composite
def grids(draw, min_d=2, max_d=4, nonnegative=False):
    d = draw(st.integers(min_d, max_d))
    start = draw(st.fractions(min_value=0 if nonnegative else -5, max_value=5,
                              max_denominator=6))
    gaps = draw(st.lists(st.fractions(min_value=F(1, 6), max_value=5, max_denominator=6),
                         min_size=d - 1, max_size=d - 1))
    vals = [start]
    for g in gaps:
        vals.append(vals[-1] + g)
    return ValueGrid(tuple(vals))


@st.composite
def binary_instances(draw, max_n=4, **kw):
    grid = draw(grids(**kw))
    n = draw(st.integers(1, max_n))
    pairs = tuple((draw(tail_lists(grid.d)), draw(tail_lists(grid.d))) for _ in range(n))
    return BinaryInstance(grid, pairs)


# validation -------------------------------------------------------------------

def test_grid_validation():
    g = validate_grid([0, 1, 3])
    assert g.d == 3 and g.nonnegative
    g = validate_grid([-1, 0])
    assert g.d == 2 and not g.nonnegative
    with pytest.raises(ValidationError) as exc:
        validate_grid([0, 0, 1])
    assert exc.value.code == "NOT_STRICTLY_INCREASING"
    with pytest.raises(ValidationError) as exc:
        validate_grid([1])
    assert exc.value.code == "TOO_FEW_VALUES"


def test_floats_are_refused():
    with pytest.raises(ValidationError) as exc:
        validate_grid([0, 0.5])
    assert exc.value.code == "NOT_RATIONAL"


def test_tail_validation():
    assert validate_tails([F(1, 2), F(1, 4)], 3).tails == (F(1, 2), F(1, 4))
    assert validate_tails([0, 0], 3).tails == (0, 0)
    for tails, code in [([F(1, 4), F(1, 2)], "NOT_NONINCREASING"),
                        ([F(3, 2), F(1, 2)], "OUT_OF_RANGE"),
                        ([F(1, 2)], "WRONG_LENGTH")]:
        with pytest.raises(ValidationError) as exc:
            validate_tails(tails, 3)
        assert exc.value.code == code


def test_instance_validation():
    t = TailDistribution((F(1, 2), F(1, 4)))
    with pytest.raises(ValidationError):
        BinaryInstance(G013, ())
    with pytest.raises(ValidationError) as exc:
        BinaryInstance(G013, ((t, TailDistribution((F(1, 2),))),))
    assert exc.value.code == "DIMENSION_MISMATCH"
    with pytest.raises(ValidationError) as exc:
        SubsetInstance(G013, (t, t), 3)
    assert exc.value.code == "BAD_K"


def test_selection_validation():
    t = TailDistribution((F(1, 2), F(1, 4)))
    inst = BinaryInstance(G013, ((t, t), (t, t)))
    with pytest.raises(ValidationError) as exc:
        selection_expectation(inst, Selection.binary([0]))
    assert exc.value.code == "INVALID_SELECTION"
    sub = SubsetInstance(G013, (t, t, t), 2)
    for bad in ([0], [0, 3], [-1, 0]):
        with pytest.raises(ValidationError):
            selection_expectation(sub, Selection.subset(bad))
    with pytest.raises(ValidationError):
        Selection.subset([1, 1])
    with pytest.raises(ValidationError):
        Selection.binary([0, 2])


# exact expectation ------------------------------------------------------------

def test_expectation_examples():
    t = TailDistribution((F(1, 2), F(1, 4)))
    assert expectation(G013, t) == 1
    assert expectation(G013, TailDistribution((0, 0))) == 0
    assert expectation(G013, t) == F(1, 2) * 0 + F(1, 4) * 1 + F(1, 4) * 3
    with pytest.raises(ValidationError) as exc:
        expectation(G013, TailDistribution((F(1, 2),)))
    assert exc.value.code == "DIMENSION_MISMATCH"


def test_min_combine_examples():
    a = TailDistribution((F(1, 2), F(1, 4)))
    assert min_combine(a, a).tails == (F(1, 4), F(1, 16))
    assert min_combine(a, TailDistribution((1, 1))) == a
    assert min_combine(a, TailDistribution((0, 0))).tails == (0, 0)
    with pytest.raises(ValidationError):
        min_combine(a, TailDistribution((F(1, 2),)))


def test_selection_expectation_symmetry():
    t = TailDistribution((F(1, 2), F(1, 4)))
    inst = BinaryInstance(G013, ((t, t),) * 3)
    values = {selection_expectation(inst, Selection.binary(b)) for b, _ in all_selections(inst)}
    assert len(values) == 1
    sub = SubsetInstance(G013, (t, TailDistribution((F(1, 3), 0))), 2)
    assert selection_expectation(sub, Selection.subset([0, 1])) == \
        expectation(G013, min_combine(*sub.items))


def test_fixture_i1_matches_joint_outcomes(i1):
    values, _ = tails_of(i1)
    sel = Selection.binary((0, 1, 0))
    ts = [list(d.tails) for d in i1.selected(sel)]
    assert selection_expectation(i1, sel) == joint_expectation(values, ts)


@settings(max_examples=80, deadline=None)
@given(binary_instances())
def test_tail_product_equals_joint_outcomes(inst):
    values, _ = tails_of(inst)
    for bits, ts in all_selections(inst):
        assert selection_expectation(inst, Selection.binary(bits)) == \
            joint_expectation(values, ts)


@settings(max_examples=60, deadline=None)
@given(binary_instances(max_n=3))
def test_min_tail_law(inst):
    # Pr{min >= l_j} from joint outcomes equals the product of tails
    for bits, ts in all_selections(inst):
        dists = inst.selected(Selection.binary(bits))
        for j in range(1, inst.grid.d):
            indicator = [F(0)] * j + [F(1)] * (inst.grid.d - j)
            prob = joint_expectation(indicator, ts)
            prod = F(1)
            for dist in dists:
                prod *= dist.tails[j - 1]
            assert prob == prod


# log view ----------------------------------------------------------------------

def test_log_vector_examples():
    L = to_log_vector(TailDistribution((1, 0)), 1, 64)
    assert L.components[0].contains(0) and L.components[0].width == 0
    assert L.components[1] is None
    L = to_log_vector(TailDistribution((F(1, 2),)), 1, 64)
    ref = neg_log_over_gamma(F(1, 2), F(1))
    c = L.components[0]
    assert float(c.lo) <= float(ref) <= float(c.hi)
    assert c.width <= F(1, 2**64) * max(1, c.hi)
    with pytest.raises(ValidationError) as exc:
        to_log_vector(TailDistribution((F(1, 2),)), 1, 8)
    assert exc.value.code == "BAD_PRECISION"
    with pytest.raises(ValidationError) as exc:
        to_log_vector(TailDistribution((F(1, 2),)), 0, 64)
    assert exc.value.code == "BAD_GAMMA"


def test_f_eval_examples():
    zero = LogVector((to_log_vector(TailDistribution((1, 1)), 1).components), F(1))
    assert f_eval(G013, zero).contains(3)
    inf = LogVector((None, None), F(1))
    assert f_eval(G013, inf) == f_eval(G013, inf) and f_eval(G013, inf).is_exact
    assert f_eval(G013, inf).lo == 0


@settings(max_examples=60, deadline=None)
@given(grids(), st.data(), st.fractions(min_value=F(1, 100), max_value=10),
       st.integers(16, 96))
def test_f_eval_brackets_expectation(grid, data, gamma, precision):
    dist = data.draw(tail_lists(grid.d))
    assert f_eval(grid, to_log_vector(dist, gamma, precision), precision) \
        .contains(expectation(grid, dist))


@settings(max_examples=40, deadline=None)
@given(grids(), st.data())
def test_log_vectors_add_like_min(grid, data):
    a, b = data.draw(tail_lists(grid.d)), data.draw(tail_lists(grid.d))
    total = to_log_vector(a, 1) + to_log_vector(b, 1)
    assert f_eval(grid, total).contains(expectation(grid, min_combine(a, b)))


@settings(max_examples=40, deadline=None)
@given(grids(), st.data(), st.sampled_from([F(1, 4), F(1, 2), F(3, 4)]))
def test_f_is_convex_and_nonincreasing(grid, data, alpha):
    a, b = data.draw(tail_lists(grid.d)), data.draw(tail_lists(grid.d))
    La, Lb = to_log_vector(a, 1), to_log_vector(b, 1)
    if any(c is None for c in La.components + Lb.components):
        return
    mix = LogVector(tuple(x * alpha + y * (1 - alpha)
                          for x, y in zip(La.components, Lb.components)), F(1))
    lhs = f_eval(grid, mix)
    rhs = f_eval(grid, La) * alpha + f_eval(grid, Lb) * (1 - alpha)
    assert lhs.lo <= rhs.hi
    bumped = LogVector(tuple(c + F(1, 3) for c in La.components), F(1))
    assert f_eval(grid, bumped).lo <= f_eval(grid, La).hi


# sign flip -----------------------------------------------------------------------

def test_negate_point_mass_and_involution(corpus_instance):
    _, inst = corpus_instance
    assert negate_instance(negate_instance(inst)) == inst
    d = inst.grid.d
    neg = negate_instance(BinaryInstance(inst.grid, ((TailDistribution.point_mass(0, d),) * 2,)))
    assert neg.pairs[0][0].tails == (1,) * (d - 1)


def test_negation_turns_max_into_min(i1):
    values, _ = tails_of(i1)
    neg = negate_instance(i1)
    for bits, ts in all_selections(i1):
        e_max = joint_expectation(values, ts, aggregate=max)
        assert -selection_expectation(neg, Selection.binary(bits)) == e_max
        assert joint_outcome_oracle(i1.grid, i1.selected(Selection.binary(bits)), "max") == e_max


def test_random_instances_are_seeded():
    assert random_binary(3, 4) == random_binary(3, 4)
