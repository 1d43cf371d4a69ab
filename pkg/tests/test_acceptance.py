"""Acceptance criteria, one test per criterion, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines; every
tolerance is pinned here, not deferred.
"""

import filecmp
import math
import time

import numpy as np
import pytest

from ffenergy import field as F
from ffenergy.characters import (AdditiveCharacter, MultiplicativeCharacter,
                                 additive_table, multiplicative_table)
from ffenergy.charsums import sum_S
from ffenergy.decompose import extract_subset, m_of_z, partition
from ffenergy.energy import additive_energy, rep_diff, sumset
from ffenergy.field import build_field
from ffenergy.harness import (ExperimentConfig, VerificationRecord, emit_csv,
                              run_suite)
from ffenergy.ratfunc import is_exceptional, poly_eval_vec, ratfunc
from ffenergy.sets import (garaev_set, interval, random_subset,
                           subset_for_params)

STOCK_FIELDS = ((2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2),
                (2, 4), (5, 2), (3, 3), (7, 2), (101, 1), (11, 2))

SEED = 20260808


def _report(num, ok, desc):
    print(f"ACCEPTANCE {num:2d}: {'PASS' if ok else 'FAIL'} - {desc}")
    assert ok, f"criterion {num} failed: {desc}"


def test_criterion_01_field_axioms():
    t0 = time.perf_counter()
    records = run_suite("field-axioms", ExperimentConfig(seed=SEED))
    elapsed = time.perf_counter() - t0
    qs = sorted({int(r.instance.split(";")[0].split("=")[1]) for r in records})
    ok = all(r.passed for r in records) and elapsed < 30.0
    ok = ok and qs == [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 101, 121]
    _report(1, ok, f"exhaustive field laws on q={qs} in {elapsed:.1f}s (< 30s)")


def test_criterion_02_character_orthogonality():
    worst = 0.0
    for p, n in STOCK_FIELDS:
        ctx = build_field(p, n)
        q = ctx.q
        for a in range(1, q):
            s = abs(additive_table(ctx, AdditiveCharacter(a)).sum())
            worst = max(worst, s / q)
            assert s <= 1e-9 * q
        for j in range(1, q - 1):
            s = abs(multiplicative_table(ctx, MultiplicativeCharacter(j)).sum())
            worst = max(worst, s / q)
            assert s <= 1e-9 * q
    _report(2, True, f"all nontrivial character sums vanish "
                     f"(worst |sum|/q = {worst:.2e} <= 1e-9)")


def test_criterion_03_weil_bound():
    rng = np.random.default_rng(SEED)
    primes = (101, 257, 1009)
    checked = 0
    for i in range(200):
        p = primes[i % 3]
        ctx = build_field(p)
        k = int(rng.integers(2, 6))
        coeffs = [int(rng.integers(0, p)) for _ in range(k)] + \
                 [int(rng.integers(1, p))]
        f = ratfunc(ctx, coeffs)
        tab = additive_table(ctx, AdditiveCharacter(int(rng.integers(1, p))))
        total = abs(tab[poly_eval_vec(ctx, f.num.coeffs, np.arange(p))].sum())
        assert total <= (k - 1) * math.sqrt(p) + 1e-9
        checked += 1
    _report(3, checked == 200,
            f"Weil bound |sum psi(f)| <= (k-1) sqrt(q) on {checked} "
            f"random polynomials over p in {primes}")


def test_criterion_04_energy_oracle():
    ctx = build_field(1009)
    rng = np.random.default_rng(SEED + 1)
    for _ in range(100):
        U = random_subset(ctx, int(rng.integers(1, 41)),
                          int(rng.integers(2 ** 31)))
        s = F.add_vec(ctx, U.elems[:, None], U.elems[None, :]).ravel()
        oracle = int((s[:, None] == s[None, :]).sum())
        assert additive_energy(U).value == oracle
    for n in range(1, 21):
        assert additive_energy(interval(ctx, 0, n)).value \
            == (2 * n ** 3 + n) // 3
    assert additive_energy(interval(ctx, 0, 4)).value == 44
    _report(4, True, "hash-based E(U) equals quadruple enumeration on 100 "
                     "random sets; AP closed form (2n^3+n)/3 for n=1..20")


def test_criterion_05_union_energy():
    ctx = build_field(257)
    rng = np.random.default_rng(SEED + 2)
    for _ in range(200):
        base = random_subset(ctx, int(rng.integers(4, 120)),
                             int(rng.integers(2 ** 31)))
        parts = int(rng.integers(2, 6))
        family = [subset_for_params(ctx.params, chunk)
                  for chunk in np.array_split(base.elems, parts)
                  if len(chunk)]
        union = family[0]
        for s in family[1:]:
            union = union.union(s)
        lhs = additive_energy(union).value ** 0.25
        rhs = sum(additive_energy(s).value ** 0.25 for s in family)
        assert lhs <= rhs + 1e-9
    _report(5, True, "E(union)^(1/4) <= sum E(A_i)^(1/4) on 200 random "
                     "disjoint families (exact integer energies)")


def test_criterion_06_decomposition_contract(tmp_path):
    rng = np.random.default_rng(SEED + 3)
    primes = (257, 1009, 4099)
    recs = []
    nontrivial_exits = 0
    for i in range(50):
        p = primes[i % 3]
        ctx = build_field(p)
        f = ratfunc(ctx, [1], [0, 1])
        lo = math.ceil(p ** 0.55)
        size = int(rng.integers(lo, min(p, 4 * lo)))
        A = random_subset(ctx, size, int(rng.integers(2 ** 31)))
        res = partition(ctx, A, f)
        combined = res.S_final.union(res.T_final)
        assert np.array_equal(combined.elems, A.elems)
        assert res.S_final.intersect(res.T_final).size == 0
        assert len(res.iterations) <= A.size
        if not res.trivial_flag:
            nontrivial_exits += 1
            assert res.e_s_final <= res.threshold
        for rec, piece in zip(res.iterations, res.pieces):
            if rec.kind == "extracted":
                rsa = rep_diff(rec.trace.S_set, A).counts
                assert all(rsa[x] >= rec.trace.certified_u
                           for x in rec.trace.U_set)
        # richness certificates, recomputed independently on the same set
        tr = extract_subset(ctx, A, f)
        rsa = rep_diff(tr.S_set, A).counts
        assert tr.U_set.size == 0 or \
            int(rsa[tr.U_set.elems].min()) >= tr.certified_u
        c2 = res.c2 if res.c2 is not None else 0.0
        recs.append(VerificationRecord(
            "acceptance-decomposition", f"p={p};size={size};i={i};c2",
            c2, 1.0, c2, True, 0.0))
    out = tmp_path / "decomposition_constants.csv"
    emit_csv(recs, str(out))
    assert out.exists() and len(out.read_text().splitlines()) == 51
    _report(6, True, f"50 partitions valid (<=A iterations, certificates "
                     f"recomputed, {nontrivial_exits} non-trivial exits); "
                     f"c2 constants recorded to CSV")


def test_criterion_07_exceptionality_detector():
    for p in (3, 5, 7):
        ctx = build_field(p)
        flag, lam = is_exceptional(ctx, ratfunc(ctx, [1, 2] + [0] * (p - 2)
                                                + [1]))
        assert flag and lam == 3 % p
        assert not is_exceptional(ctx, ratfunc(ctx, [0, 0, 1]))[0]
        assert not is_exceptional(ctx, ratfunc(ctx, [1], [0, 1]))[0]
    ctx9 = build_field(3, 2)
    flag, lam = is_exceptional(ctx9, ratfunc(ctx9, [0, 0, 0, 1]))
    assert flag
    _report(7, True, "X^p-X+3X+1 flagged with witness 3 mod p; X^2 and X^-1 "
                     "clean for p in {3,5,7}; linearized permutation "
                     "polynomial over GF(9) flagged")


def test_criterion_08_triple_sum_bounds():
    rng = np.random.default_rng(SEED + 4)
    for qfield in (101, 257):
        ctx = build_field(qfield)
        for _ in range(100):
            sizes = rng.integers(2, 41, size=3)
            A = random_subset(ctx, int(sizes[0]), int(rng.integers(2 ** 31)))
            B = random_subset(ctx, int(sizes[1]), int(rng.integers(2 ** 31)))
            C = random_subset(ctx, int(sizes[2]), int(rng.integers(2 ** 31)))
            psi = AdditiveCharacter(int(rng.integers(1, qfield)))
            r = sum_S(ctx, A, B, C, psi)
            assert r.magnitude <= \
                A.size * math.sqrt(B.size * C.size * qfield) + 1e-9
    ctx = build_field(1009)
    m = int(0.1 * math.sqrt(1009))
    J = interval(ctx, 0, m)
    r = sum_S(ctx, J, J, J, AdditiveCharacter(1))
    assert r.magnitude >= 0.98 * J.size ** 3
    _report(8, True, "|S_psi| <= A sqrt(BCq) with constant 1 on 200 random "
                     "instances; short-interval example reaches 0.98*ABC")


def test_criterion_09_degeneracy():
    """At most 2 pairs share sum and inverse-sum when the sum is nonzero;
    shared zero sums degenerate to the matched pairs b, -b exactly."""
    rng = np.random.default_rng(SEED + 5)
    for i in range(50):
        qfield = (101, 257)[i % 2]
        ctx = build_field(qfield)
        nzr = np.arange(1, qfield)
        B = subset_for_params(ctx.params,
                              rng.permutation(nzr)[:int(rng.integers(5, 41))])
        C = subset_for_params(ctx.params,
                              rng.permutation(nzr)[:int(rng.integers(5, 41))])
        binv = ctx.inv_table[B.elems]
        cinv = ctx.inv_table[C.elems]
        sig = F.add_vec(ctx, B.elems[:, None], C.elems[None, :]).ravel()
        tau = F.add_vec(ctx, binv[:, None], cinv[None, :]).ravel()
        keys = sig.astype(np.int64) * qfield + tau
        nz = sig != 0
        _, counts = np.unique(keys[nz], return_counts=True)
        assert int(counts.max(initial=0)) <= 2
        t = int(np.isin(ctx.neg_table[B.elems], C.elems).sum())
        assert int((~nz).sum()) == t
    _report(9, True, "coincident sum and inverse-sum admit <= 2 pairs "
                     "(nonzero sums) on 50 random (B,C); zero-sum diagonal "
                     "matches the b,-b count exactly")


def test_criterion_10_garaev():
    ctx = build_field(1009)
    details = []
    for lam in (100, 200, 300):
        A = garaev_set(ctx, lam)
        floor = lam * lam // 1009
        assert A.size >= floor
        aa = sumset(A, A)
        assert aa.size <= 2 * lam - 1
        e = additive_energy(A).value
        consequence = A.size ** 4 / aa.size
        assert e >= consequence - 1e-9
        details.append(f"lam={lam}:|A|={A.size}>={floor},|A+A|={aa.size}")
    _report(10, True, "Garaev intersection sizes and narrow sumsets hold "
                      f"({'; '.join(details)}); E >= A^4/|A+A| recorded")


def test_criterion_11_determinism(tmp_path):
    cfg_a = ExperimentConfig(suite="constructions", trials=5, seed=SEED,
                             output=str(tmp_path / "a.csv"))
    cfg_b = ExperimentConfig(suite="constructions", trials=5, seed=SEED,
                             output=str(tmp_path / "b.csv"))
    recs_a = run_suite(cfg_a.suite, cfg_a)
    emit_csv(recs_a, cfg_a.output)
    recs_b = run_suite(cfg_b.suite, cfg_b)
    emit_csv(recs_b, cfg_b.output)
    ok = filecmp.cmp(cfg_a.output, cfg_b.output, shallow=False)
    _report(11, ok, "suite rerun with identical config and seed is "
                    "byte-identical CSV")
