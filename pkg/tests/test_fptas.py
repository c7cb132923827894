import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from mesp import fptas
from mesp.errors import ValidationError
from mesp.exact import solve_exact
from mesp.fptas import (FptasConfig, build_table, compute_T, dp_min_min, dp_min_min_binary,
                        dp_min_min_subset, round_vectors)
from mesp.instances import random_binary, random_subset
from mesp.model import BinaryInstance, SubsetInstance, TailDistribution, validate_grid
from oracles import all_selections, neg_log_over_gamma, shifted_to_zero

G013 = validate_grid([0, 1, 3])


def test_config_validation():
    for bad in (0, F(-1, 2), F(3, 2)):
        with pytest.raises(ValidationError):
            FptasConfig(bad)
    assert FptasConfig(F(1, 2)).gamma(4) == F(1, 48)


def test_compute_T_examples(i1):
    ones = BinaryInstance(G013, ((TailDistribution((1, 1)),) * 2,))
    assert compute_T(ones, 1) in (0, 1, 2)
    half = BinaryInstance(validate_grid([0, 1]), ((TailDistribution((F(1, 2),)),) * 2,))
    # two tails of 1/2: p* = 1/4
    assert compute_T(half, 1) in (2, 3)
    gamma = F(1, 2) / (6 * i1.n)
    p_star = math.prod(q for d in i1.distributions for q in d.tails if q)
    x = neg_log_over_gamma(F(p_star), gamma)
    T = compute_T(i1, gamma)
    assert x <= T <= x + 2


def test_round_vectors_examples():
    inst = BinaryInstance(validate_grid([0, 1, 2]),
                          ((TailDistribution((1, 0)), TailDistribution((F(1, 2), F(1, 2)))),
                           (TailDistribution((1, 1)), TailDistribution((1, 1)))))
    rounded = round_vectors(inst, FptasConfig(1))
    assert rounded[0].components[0] == 0
    assert rounded[0].is_infinite(1)
    # gamma = 1/12: x = 12 ln 2 = 8.3177...
    assert rounded[1].components[0] in (7, 8)


def test_negative_grid_rejected():
    inst = random_binary(3, 3, nonnegative=False)
    if inst.grid.nonnegative:
        inst = BinaryInstance(validate_grid([-1, 0, 1]), inst.pairs)
    with pytest.raises(ValidationError) as exc:
        dp_min_min(inst, FptasConfig(1))
    assert exc.value.code == "GRID_NEGATIVE"
    assert "l_0 >= 0" in str(exc.value)


def _check_rounding(inst, eps):
    config = FptasConfig(eps)
    gamma = config.gamma(inst.n)
    rounded = round_vectors(inst, config)
    for dist, vec in zip(inst.distributions, rounded):
        for q, c in zip(dist.tails, vec.components):
            if q == 0:
                assert c == vec.T + 1
                continue
            x = neg_log_over_gamma(q, gamma)
            assert c <= x <= c + 2


@pytest.mark.parametrize("eps", [F(1), F(3, 10), F(1, 10)])
def test_rounding_sound_on_corpus(eps, corpus_instance):
    # rounding reads only the tails, so a translated grid covers negative fixtures too
    _check_rounding(shifted_to_zero(corpus_instance[1]), eps)


def test_n1_picks_better_option():
    a = TailDistribution((F(1, 2), F(1, 4)))
    b = TailDistribution((F(1, 2), F(1, 5)))
    res = dp_min_min_binary(BinaryInstance(G013, ((a, b),)), FptasConfig(1))
    assert res.selection.bits == (1,)


def test_absorbing_options():
    zero = TailDistribution((0, 0))
    other = TailDistribution((F(1, 2), F(1, 3)))
    inst = BinaryInstance(G013, ((other, zero), (zero, other), (other, other)))
    res = dp_min_min_binary(inst, FptasConfig(F(1, 2)))
    assert res.exact_value == 0


@pytest.mark.parametrize("eps", [F(1), F(3, 10), F(1, 10)])
def test_fixture_i2_ratio(eps, i2):
    opt = solve_exact(i2).value
    sel, bound, value = dp_min_min_binary(i2, FptasConfig(eps))
    assert opt <= value <= (1 + eps) * opt
    assert value <= bound.hi


def test_subset_examples(s1):
    res = dp_min_min_subset(s1, FptasConfig(F(1, 10)))
    assert res.exact_value <= F(11, 10) * solve_exact(s1).value
    full = SubsetInstance(s1.grid, s1.items, s1.n)
    res = dp_min_min_subset(full, FptasConfig(F(1, 2)))
    assert res.selection.chosen == tuple(range(s1.n))
    one = SubsetInstance(s1.grid, s1.items, 1)
    res = dp_min_min_subset(one, FptasConfig(F(1, 2)))
    assert res.exact_value <= F(3, 2) * solve_exact(one).value


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.sampled_from([F(1), F(1, 2), F(1, 5)]))
def test_every_selection_is_reachable(seed, n, eps):
    inst = random_binary(seed, n, allow_zero=seed % 2 == 0)
    rounded = round_vectors(inst, FptasConfig(eps))
    table = build_table(inst, rounded)
    sat = table.T + 1
    for bits, _ in all_selections(inst):
        comps = [0] * table.ndims
        for i, b in enumerate(bits):
            comps = [min(c + v, sat) for c, v in zip(comps, rounded[2 * i + b].components)]
        assert table.reachable(inst.n, comps)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 7), st.sampled_from([F(1), F(1, 3)]))
def test_subset_ratio_property(seed, n, eps):
    k = seed % n + 1
    inst = random_subset(seed, n, k, d=3 + seed % 2)
    res = dp_min_min_subset(inst, FptasConfig(eps))
    opt = solve_exact(inst).value
    assert opt <= res.exact_value <= (1 + eps) * opt
    assert res.exact_value <= res.bound.hi


def test_table_shrinks_as_epsilon_grows(i1):
    sizes = [dp_min_min(i1, FptasConfig(e)).table_entries for e in (F(1, 8), F(1, 2), F(1))]
    assert sizes[0] > sizes[1] > sizes[2]


def test_results_are_deterministic(i2):
    a = dp_min_min(i2, FptasConfig(F(1, 10)))
    b = dp_min_min(i2, FptasConfig(F(1, 10)))
    assert a == b


def test_pure_python_backend_gives_same_result(i2, monkeypatch):
    compiled = dp_min_min(i2, FptasConfig(F(1, 10)))
    monkeypatch.setattr(fptas.kernels, "backend", fptas.kernels.python_backend)
    assert dp_min_min(i2, FptasConfig(F(1, 10))) == compiled
