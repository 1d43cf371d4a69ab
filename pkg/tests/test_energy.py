"""Energies and representation counts against definitional oracles."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ffenergy import field as F
from ffenergy.energy import (additive_energy, cross_energy, f_energy,
                             multiplicative_energy, rep_diff, rep_f, rep_sum,
                             sumset)
from ffenergy.field import build_field
from ffenergy.ratfunc import ratfunc
from ffenergy.sets import (field_set, interval, mult_subgroup, random_subset,
                           subset_for_params)


def test_rep_sum_examples(ctx5):
    z = subset_for_params(ctx5.params, [0])
    assert rep_sum(z, z).as_dict() == {0: 1}
    u = subset_for_params(ctx5.params, [1, 2])
    v = subset_for_params(ctx5.params, [3])
    assert rep_sum(u, v).as_dict() == {4: 1, 0: 1}  # 2+3 wraps to 0 in GF(5)
    full = field_set(ctx5)
    counts = rep_sum(full, full).counts
    assert np.all(counts == 5)


def test_rep_diff_examples(ctx7):
    u = subset_for_params(ctx7.params, [2, 4, 5])
    assert rep_diff(u, u).counts[0] == 3
    a = subset_for_params(ctx7.params, [6])
    b = subset_for_params(ctx7.params, [2])
    assert rep_diff(a, b).as_dict() == {4: 1}
    full = field_set(ctx7)
    assert np.all(rep_diff(full, full).counts == 7)


def test_rep_f_examples(ctx7):
    fx = ratfunc(ctx7, [0, 1])
    one = subset_for_params(ctx7.params, [1])
    assert rep_f(ctx7, fx, one).as_dict() == {2: 1}
    finv = ratfunc(ctx7, [1], [0, 1])
    zero = subset_for_params(ctx7.params, [0])
    rf = rep_f(ctx7, finv, zero)
    assert rf.total == 0 and not rf.as_dict()
    fsq = ratfunc(ctx7, [0, 0, 1])
    pm1 = subset_for_params(ctx7.params, [1, 6])
    assert rep_f(ctx7, fsq, pm1).as_dict() == {2: 4}


def test_rep_against_dict_oracle(ctx9):
    rng = np.random.default_rng(3)
    u = subset_for_params(ctx9.params, rng.permutation(9)[:5])
    v = subset_for_params(ctx9.params, rng.permutation(9)[:4])
    want = oracles.rep_map(list(u), list(v), lambda a, b: F.add(ctx9, a, b))
    assert rep_sum(u, v).as_dict() == want
    want = oracles.rep_map(list(u), list(v),
                           lambda a, b: F.sub(ctx9, a, b))
    assert rep_diff(u, v).as_dict() == want


def test_additive_energy_examples():
    ctx17 = build_field(17)
    assert additive_energy(interval(ctx17, 0, 4)).value == 44
    assert additive_energy(subset_for_params(ctx17.params, [3])).value == 1
    ctx5 = build_field(5)
    assert additive_energy(field_set(ctx5)).value == 125
    report = additive_energy(interval(ctx17, 0, 4))
    assert report.kind == "additive"


def test_ap_closed_form(ctx1009):
    for n in range(1, 21):
        assert additive_energy(interval(ctx1009, 0, n)).value \
            == (2 * n ** 3 + n) // 3


def test_cross_energy_examples(ctx5):
    b = subset_for_params(ctx5.params, [0])
    c = subset_for_params(ctx5.params, [1, 2, 4])
    assert cross_energy(b, c).value == 3
    full = field_set(ctx5)
    assert cross_energy(full, full).value == 125
    u = subset_for_params(ctx5.params, [1, 2, 3])
    assert cross_energy(u, u).value == additive_energy(u).value


def test_multiplicative_energy_examples(ctx7, ctx5):
    for d in (1, 2, 3, 6):
        assert multiplicative_energy(mult_subgroup(ctx7, d)).value == d ** 3
    assert multiplicative_energy(
        subset_for_params(ctx7.params, [1])).value == 1
    # zeros counted literally by the defining equation u1 u2 = u3 u4
    assert multiplicative_energy(
        subset_for_params(ctx5.params, [0, 1])).value == 10


def test_energy_matches_quadruple_oracle_small(ctx9):
    rng = np.random.default_rng(5)
    for _ in range(6):
        elems = sorted(int(x) for x in rng.permutation(9)[:rng.integers(1, 7)])
        u = subset_for_params(ctx9.params, elems)
        want = oracles.quad_energy(elems, lambda a, b: F.add(ctx9, a, b))
        assert additive_energy(u).value == want
        want = oracles.quad_mult_energy(elems, lambda a, b: F.mul(ctx9, a, b))
        assert multiplicative_energy(u).value == want


def test_f_energy(ctx7):
    finv = ratfunc(ctx7, [1], [0, 1])
    u = subset_for_params(ctx7.params, [1, 2, 4])
    img = sorted(F.inv(ctx7, x) for x in u)
    want = oracles.quad_energy(img, lambda a, b: F.add(ctx7, a, b))
    assert f_energy(ctx7, finv, u).value == want


def test_sum_diff_identity_and_bounds(ctx101):
    rng = np.random.default_rng(11)
    for _ in range(10):
        u = random_subset(ctx101, int(rng.integers(2, 40)),
                          int(rng.integers(2 ** 31)))
        e = additive_energy(u).value
        assert e == int(np.sum(rep_sum(u, u).counts ** 2))
        assert u.size ** 2 <= e <= u.size ** 3
        assert e >= u.size ** 4 / sumset(u, u).size


@settings(max_examples=25, deadline=None)
@given(st.sets(st.integers(0, 100), min_size=1, max_size=30),
       st.sets(st.integers(0, 100), min_size=1, max_size=30))
def test_cross_energy_cauchy_schwarz(bs, cs):
    ctx = build_field(101)
    b = subset_for_params(ctx.params, bs)
    c = subset_for_params(ctx.params, cs)
    ebc = cross_energy(b, c).value
    assert ebc * ebc <= additive_energy(b).value * additive_energy(c).value


@settings(max_examples=25, deadline=None)
@given(st.sets(st.integers(0, 256), min_size=2, max_size=60),
       st.integers(2, 5))
def test_union_energy_bound(xs, parts):
    ctx = build_field(257)
    elems = np.array(sorted(xs), dtype=np.int64)
    family = [subset_for_params(ctx.params, chunk)
              for chunk in np.array_split(elems, parts) if len(chunk)]
    union = family[0]
    for s in family[1:]:
        union = union.union(s)
    lhs = additive_energy(union).value ** 0.25
    rhs = sum(additive_energy(s).value ** 0.25 for s in family)
    assert lhs <= rhs + 1e-9


def test_rep_totals(ctx101):
    u = random_subset(ctx101, 13, 1)
    v = random_subset(ctx101, 9, 2)
    rs = rep_sum(u, v)
    assert rs.total == 13 * 9 == int(rs.counts.sum())
