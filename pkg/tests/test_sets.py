"""Set generators, their structural invariants, and the spec mini-language."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffenergy import field as F
from ffenergy.errors import BadArgument, BadLambda
from ffenergy.field import build_field
from ffenergy.sets import (FSubset, add_subspace, field_set, garaev_set,
                           geometric_progression, interval, inverse_set,
                           mult_subgroup, parse_set_spec, random_subset,
                           subset_for_params)


def test_fsubset_invariants(ctx7):
    s = subset_for_params(ctx7.params, [5, 1, 5, 3])
    assert list(s) == [1, 3, 5]
    assert 3 in s and 2 not in s
    with pytest.raises(BadArgument):
        subset_for_params(ctx7.params, [7])


def test_set_algebra(ctx7):
    a = subset_for_params(ctx7.params, [1, 2, 3])
    b = subset_for_params(ctx7.params, [3, 4])
    assert list(a.union(b)) == [1, 2, 3, 4]
    assert list(a.minus(b)) == [1, 2]
    assert list(a.intersect(b)) == [3]


def test_interval():
    ctx = build_field(17)
    assert list(interval(ctx, 0, 5)) == [0, 1, 2, 3, 4]
    assert sorted(interval(ctx, 15, 4)) == [0, 1, 15, 16]
    assert interval(ctx, 0, 17).size == 17
    assert interval(ctx, 3, 0).size == 0
    with pytest.raises(BadArgument):
        interval(build_field(3, 2), 0, 2)


def test_geometric_progression():
    ctx = build_field(17)
    assert sorted(geometric_progression(ctx, 2, 4)) == [2, 4, 8, 16]
    assert list(geometric_progression(ctx, 1, 9)) == [1]
    assert sorted(geometric_progression(build_field(5), 3, 3)) == [2, 3, 4]


def test_mult_subgroup(ctx7):
    assert list(mult_subgroup(ctx7, 1)) == [1]
    assert mult_subgroup(ctx7, 6).size == 6
    assert sorted(mult_subgroup(ctx7, 2)) == [1, 6]
    with pytest.raises(BadArgument):
        mult_subgroup(ctx7, 4)


@pytest.mark.parametrize("d", [1, 2, 3, 6])
def test_subgroup_closure(ctx7, d):
    g = mult_subgroup(ctx7, d)
    for a in g:
        assert F.inv(ctx7, a) in g
        for b in g:
            assert F.mul(ctx7, a, b) in g


def test_add_subspace(ctx9):
    assert list(add_subspace(ctx9, [])) == [0]
    assert list(add_subspace(ctx9, [1])) == [0, 1, 2]
    assert add_subspace(ctx9, [1, 3]).size == 9
    sub = add_subspace(ctx9, [3])
    for a in sub:
        for b in sub:
            assert F.add(ctx9, a, b) in sub


def test_random_subset_determinism(ctx101):
    a = random_subset(ctx101, 20, 42)
    b = random_subset(ctx101, 20, 42)
    assert np.array_equal(a.elems, b.elems)
    c = random_subset(ctx101, 20, 43)
    assert not np.array_equal(a.elems, c.elems)
    assert random_subset(ctx101, 0, 1).size == 0
    assert random_subset(ctx101, 101, 1).size == 101
    with pytest.raises(BadArgument):
        random_subset(ctx101, 102, 1)


def test_garaev_construction(ctx101):
    a = garaev_set(ctx101, 30)
    assert a.size >= 30 * 30 // 101
    ctx5 = build_field(5)
    g5 = garaev_set(ctx5, 4)
    ss = {F.add(ctx5, x, y) for x in g5 for y in g5}
    assert len(ss) <= 2 * 4 - 1
    g7 = garaev_set(build_field(7), 1)
    assert g7.size <= 1
    with pytest.raises(BadLambda):
        garaev_set(ctx101, 0)
    with pytest.raises(BadLambda):
        garaev_set(ctx101, 101)


def test_garaev_floor_regimes(ctx1009):
    # pigeonhole-certain whenever lam^3 <= p^2 + p*lam
    for lam in (10, 31, 100):
        assert garaev_set(ctx1009, lam).size >= lam * lam / 1009 - 1
    # far above p^(2/3) the floor can genuinely fail, loudly
    with pytest.raises(AssertionError):
        garaev_set(ctx1009, 700)


def test_garaev_sumset_always_narrow(ctx1009):
    for lam in (100, 200, 300):
        a = garaev_set(ctx1009, lam)
        # subset of one length-lam interval, so A+A spans < 2*lam values
        diffs = np.add.outer(a.elems, a.elems).ravel()
        assert len(np.unique(diffs)) <= 2 * lam - 1


def test_inverse_set(ctx7):
    assert list(inverse_set(ctx7, subset_for_params(ctx7.params, [1]))) == [1]
    assert inverse_set(ctx7, subset_for_params(ctx7.params, [0])).size == 0
    assert sorted(inverse_set(ctx7, subset_for_params(ctx7.params, [2, 3]))) \
        == [4, 5]


def test_mini_language(ctx101):
    assert list(parse_set_spec(ctx101, "interval:0,5")) == [0, 1, 2, 3, 4]
    assert sorted(parse_set_spec(ctx101, "gp:2,4")) == [2, 4, 8, 16]
    assert parse_set_spec(ctx101, "msub:4").size == 4
    assert parse_set_spec(ctx101, "rand:10,3").size == 10
    assert parse_set_spec(ctx101, "garaev:30").size >= 8
    u = parse_set_spec(ctx101, "union(interval:0,5,gp:2,4)")
    assert sorted(u) == sorted({0, 1, 2, 3, 4, 8, 16})
    inv_spec = parse_set_spec(ctx101, "inv(interval:1,5)")
    assert sorted(inv_spec) == sorted(pow(x, 99, 101) for x in range(1, 6))
    img = parse_set_spec(ctx101, "image(1/0,1,interval:1,5)")
    assert sorted(img) == sorted(inv_spec)
    img2 = parse_set_spec(ctx101, "image(0,0,1,interval:0,4)")
    assert sorted(img2) == sorted({(x * x) % 101 for x in range(4)})
    nested = parse_set_spec(ctx101, "union(inv(gp:2,3),union(interval:0,2,msub:2))")
    assert nested.size >= 4


def test_mini_language_asub():
    ctx9 = build_field(3, 2)
    assert parse_set_spec(ctx9, "asub:1").size == 3
    assert parse_set_spec(ctx9, "asub:1;3").size == 9
    assert list(parse_set_spec(ctx9, "asub:")) == [0]


@pytest.mark.parametrize("bad", [
    "", "nope", "interval:1", "interval:a,b", "msub:4x", "rand:5",
    "union(interval:0,2)", "image(1,interval:0,2,extra:1)", "gp:1",
])
def test_mini_language_rejects(ctx101, bad):
    with pytest.raises(BadArgument):
        parse_set_spec(ctx101, bad)


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(0, 100), max_size=25))
def test_fsubset_roundtrip(xs):
    ctx = build_field(101)
    s = subset_for_params(ctx.params, xs)
    assert s.size == len(xs)
    assert set(s) == xs
    assert np.all(np.diff(s.elems) > 0)


def test_field_set(ctx7):
    assert field_set(ctx7).size == 7


def test_cross_field_algebra_rejected(ctx7, ctx101):
    a = subset_for_params(ctx7.params, [1, 2])
    b = subset_for_params(ctx101.params, [1, 2])
    with pytest.raises(BadArgument):
        a.union(b)
    with pytest.raises(BadArgument):
        a.minus(b)
