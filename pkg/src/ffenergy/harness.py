"""Verification suites, experiment configuration, and CSV emission.

Suites come in two tiers.  Hard suites check exact statements (orthogonality,
union energy, partition validity, degenerate-pair counts, fiber bounds, the
Weil polynomial bound) and any violation marks the record failed; run_suite
callers exit nonzero on those.  Report-only suites measure observed implied
constants for the asymptotic statements, which cannot be pass/fail at fixed
q; their records always pass and the ratio column is the payload.

Determinism: a suite is a pure function of its config (seed included), and
emit_csv writes rows in sorted order with 12-significant-digit floats, so a
rerun is byte-identical.  Wall-clock runtimes are therefore zeroed in the CSV
unless timing output is explicitly requested.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field as dc_field, fields as dc_fields

import numpy as np

from . import field as F
from .characters import (AdditiveCharacter, MultiplicativeCharacter,
                         additive_table, multiplicative_table)
from .charsums import (WeightVector, bound_evaluators, convolution_set,
                       kloosterman_K, sum_S, sum_T, sum_mixed, weight_norms)
from .decompose import extract_subset, larger_half, m_of_z, partition
from .energy import (additive_energy, cross_energy, multiplicative_energy,
                     rep_diff, rep_f, rep_sum, sumset)
from .errors import BadArgument, ConfigError
from .field import build_field
from .ratfunc import (apply_to_set, eval_vec, is_exceptional, parse_ratfunc,
                      poly_eval_vec, ratfunc)
from .sets import (FSubset, field_set, garaev_set, geometric_progression,
                   interval, inverse_set, mult_subgroup, parse_set_spec,
                   random_subset, subset_for_params)

# the stock fields of the exhaustive-law checks: q = 2..121
STOCK_FIELDS = ((2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2),
                (2, 4), (5, 2), (3, 3), (7, 2), (101, 1), (11, 2))

X_INVERSE = "1/0,1"


@dataclass(frozen=True)
class VerificationRecord:
    suite: str
    instance: str
    lhs: float
    rhs: float
    ratio: float
    passed: bool
    runtime_ms: float = 0.0


@dataclass
class ExperimentConfig:
    """Schema for experiment/verify runs; unknown keys are rejected by name."""

    suite: str = "all"
    p: int = 0
    n: int = 1
    sets: list = dc_field(default_factory=list)
    fn: str = X_INVERSE
    chi: int = 1
    psi: int = 1
    trials: int = 20
    seed: int = 20260808
    output: str | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = {f.name: f.type for f in dc_fields(cls)}
        for key in raw:
            if key not in known:
                raise ConfigError(f"unknown config key: {key!r}")
        for key, want in (("suite", str), ("p", int), ("n", int),
                          ("fn", str), ("chi", int), ("psi", int),
                          ("trials", int), ("seed", int)):
            if key in raw and not isinstance(raw[key], want):
                raise ConfigError(f"config key {key!r} must be {want.__name__}")
        if "sets" in raw and not (isinstance(raw["sets"], list)
                                  and all(isinstance(s, str) for s in raw["sets"])):
            raise ConfigError("config key 'sets' must be a list of strings")
        if "output" in raw and raw["output"] is not None \
                and not isinstance(raw["output"], str):
            raise ConfigError("config key 'output' must be a string path")
        return cls(**raw)

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot load config {path}: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        return cls.from_dict(raw)


def _ratio(lhs, rhs):
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf


def _rec(suite, instance, lhs, rhs, passed, t0):
    ms = (time.perf_counter() - t0) * 1e3
    return VerificationRecord(suite, instance, float(lhs), float(rhs),
                              _ratio(lhs, rhs), bool(passed), ms)


# ---------------------------------------------------------------------------
# standalone lemma verifiers
# ---------------------------------------------------------------------------

def verify_lemma_prodsum(ctx, W, X, Y, Z, f) -> VerificationRecord:
    """Count J = #{f(w+x) = y+z} exactly and report the discrepancy from the
    main term WXYZ/q, normalized by sqrt(WXYZ q) (report-only constant)."""
    t0 = time.perf_counter()
    wx = rep_sum(W, X).counts
    support = np.nonzero(wx)[0]
    vals, defined = eval_vec(ctx, f, support)
    img_counts = np.zeros(ctx.q, dtype=np.int64)
    np.add.at(img_counts, vals[defined], wx[support][defined])
    yz = rep_sum(Y, Z).counts
    j_count = int(img_counts @ yz)
    sizes = W.size * X.size * Y.size * Z.size
    main = sizes / ctx.q
    lhs = abs(j_count - main)
    rhs = math.sqrt(sizes * ctx.q) if sizes else 0.0
    inst = (f"q={ctx.q};W={W.size};X={X.size};Y={Y.size};Z={Z.size};"
            f"k={f.degree};J={j_count}")
    return _rec("lemmas", "prodsum;" + inst, lhs, rhs, True, t0)


def verify_lemma_rich(ctx, A, S, U, u, f, tau) -> VerificationRecord:
    """Count #{x : r_U(f;x) >= tau} against A S U q / (u^2 tau^2).

    Preconditions (checked, BadArgument on violation): r_{S,-A}(x) >= u for
    every x in U, and tau >= 2 k A S U / (u q).
    """
    t0 = time.perf_counter()
    if u <= 0:
        raise BadArgument("richness u must be positive")
    rsa = rep_diff(S, A).counts
    if U.size and int(rsa[U.elems].min()) < u:
        raise BadArgument("precondition r_{S,-A} >= u fails on U")
    k = max(f.degree, 1)
    tau_floor = 2 * k * A.size * S.size * U.size / (u * ctx.q)
    if tau < tau_floor:
        raise BadArgument(f"tau = {tau} below the floor {tau_floor}")
    counts = rep_f(ctx, f, U).counts
    lhs = int((counts >= tau).sum())
    rhs = A.size * S.size * U.size * ctx.q / (u * u * tau * tau)
    inst = (f"q={ctx.q};A={A.size};S={S.size};U={U.size};u={u};tau={tau:.6g}")
    return _rec("lemmas", "rich;" + inst, lhs, rhs, True, t0)


def verify_union_energy(ctx, family) -> VerificationRecord:
    """Hard assertion of E(union)^(1/4) <= sum E(A_i)^(1/4), exact energies."""
    t0 = time.perf_counter()
    for i, a in enumerate(family):
        for b in family[i + 1:]:
            if a.intersect(b).size:
                raise BadArgument("family must be pairwise disjoint")
    union = family[0]
    for a in family[1:]:
        union = union.union(a)
    e_union = additive_energy(union).value
    rhs4 = sum(additive_energy(a).value ** 0.25 for a in family) ** 4
    passed = e_union ** 0.25 <= sum(
        additive_energy(a).value ** 0.25 for a in family) + 1e-9
    inst = f"q={ctx.q};n={len(family)};sizes={'|'.join(str(a.size) for a in family)}"
    return _rec("lemmas", "union-energy;" + inst, e_union, rhs4, passed, t0)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _suite_field_axioms(cfg) -> list:
    out = []
    for p, n in STOCK_FIELDS:
        ctx = build_field(p, n)
        q = ctx.q
        ii = np.arange(q, dtype=np.int64)
        a3 = ii[:, None, None]
        b3 = ii[None, :, None]
        c3 = ii[None, None, :]

        def law(name, violations, t0):
            out.append(_rec("field-axioms", f"q={q};{name}",
                            violations, 0, violations == 0, t0))

        t0 = time.perf_counter()
        bad = int((F.mul_vec(ctx, F.mul_vec(ctx, a3, b3), c3)
                   != F.mul_vec(ctx, a3, F.mul_vec(ctx, b3, c3))).sum())
        law("mul-assoc", bad, t0)

        t0 = time.perf_counter()
        bad = int((F.add_vec(ctx, F.add_vec(ctx, a3, b3), c3)
                   != F.add_vec(ctx, a3, F.add_vec(ctx, b3, c3))).sum())
        law("add-assoc", bad, t0)

        t0 = time.perf_counter()
        bad = int((F.mul_vec(ctx, a3, F.add_vec(ctx, b3, c3))
                   != F.add_vec(ctx, F.mul_vec(ctx, a3, b3),
                                F.mul_vec(ctx, a3, c3))).sum())
        law("distributivity", bad, t0)

        t0 = time.perf_counter()
        a2, b2 = ii[:, None], ii[None, :]
        bad = int((F.mul_vec(ctx, a2, b2) != F.mul_vec(ctx, b2, a2)).sum())
        bad += int((F.add_vec(ctx, a2, b2) != F.add_vec(ctx, b2, a2)).sum())
        law("commutativity", bad, t0)

        t0 = time.perf_counter()
        nz = ii[1:]
        bad = int((F.mul_vec(ctx, nz, ctx.inv_table[nz]) != 1).sum())
        bad += int((F.add_vec(ctx, ii, ctx.neg_table[ii]) != 0).sum())
        law("inverse-laws", bad, t0)

        t0 = time.perf_counter()
        powers = ctx.exp_table
        bad = int(len(np.unique(powers)) != q - 1)
        bad += int(F.mul_vec(ctx, np.int64(powers[-1]),
                             np.int64(ctx.generator)) != 1)
        law("generator-order", bad, t0)

        t0 = time.perf_counter()
        counts = np.bincount(ctx.trace_table, minlength=p)
        bad = int((counts != q // p).sum())
        law("trace-balance", bad, t0)

        t0 = time.perf_counter()
        frob = F.pow_vec(ctx, ii, p)
        bad = int((F.pow_vec(ctx, F.add_vec(ctx, a2, b2), p)
                   != F.add_vec(ctx, frob[:, None], frob[None, :])).sum())
        fixed = ii[frob == ii]
        bad += int(not np.array_equal(fixed, np.arange(p)))
        law("frobenius", bad, t0)
    return out


def _random_sets(ctx, rng, count, lo, hi):
    for _ in range(count):
        size = int(rng.integers(lo, hi + 1))
        yield random_subset(ctx, size, int(rng.integers(0, 2 ** 31)))


def _suite_characters(cfg) -> list:
    out = []
    for p, n in STOCK_FIELDS:
        ctx = build_field(p, n)
        q = ctx.q
        t0 = time.perf_counter()
        tr_all = ctx.trace_table[F.mul_vec(ctx, np.arange(q)[:, None],
                                           np.arange(q)[None, :])]
        psi_sums = np.abs(np.exp((2j * np.pi / p) * tr_all).sum(axis=1))
        worst = float(psi_sums[1:].max()) if q > 1 else 0.0
        out.append(_rec("characters", f"q={q};psi-orthogonality",
                        worst, 1e-9 * q, worst <= 1e-9 * q, t0))

        t0 = time.perf_counter()
        if q > 2:
            ks = np.arange(q - 1)
            mat = np.exp((2j * np.pi / (q - 1)) * ((ks[:, None] * ks[None, :])
                                                   % (q - 1)))
            chi_sums = np.abs(mat.sum(axis=1))
            worst = float(chi_sums[1:].max())
        else:
            worst = 0.0
        out.append(_rec("characters", f"q={q};chi-orthogonality",
                        worst, 1e-9 * q, worst <= 1e-9 * q, t0))

        t0 = time.perf_counter()
        rng = np.random.default_rng(cfg.seed + q)
        aa = rng.integers(0, q, 64)
        xx = rng.integers(0, q, 64)
        yy = rng.integers(0, q, 64)
        err = 0.0
        for a, x, y in zip(aa, xx, yy):
            tab = additive_table(ctx, AdditiveCharacter(int(a)))
            lhs = tab[F.add(ctx, int(x), int(y))]
            err = max(err, abs(lhs - tab[x] * tab[y]))
        out.append(_rec("characters", f"q={q};psi-multiplicativity",
                        err, 1e-10, err <= 1e-10, t0))
    out.extend(_weil_records("characters", cfg.seed, cfg.trials))
    return out


def _weil_records(suite, seed, count, primes=(101, 257, 1009)) -> list:
    """|sum_x psi(f(x))| <= (deg f - 1) sqrt(q), hard, for random polynomials
    of degree 2..5 (coprime to p) and random nontrivial psi."""
    out = []
    rng = np.random.default_rng(seed)
    for i in range(count):
        p = primes[i % len(primes)]
        ctx = build_field(p)
        k = int(rng.integers(2, 6))
        coeffs = [int(rng.integers(0, p)) for _ in range(k)] + \
                 [int(rng.integers(1, p))]
        f = ratfunc(ctx, coeffs)
        a = int(rng.integers(1, p))
        tab = additive_table(ctx, AdditiveCharacter(a))
        vals = poly_eval_vec(ctx, f.num.coeffs, np.arange(p))
        t0 = time.perf_counter()
        lhs = abs(tab[vals].sum())
        rhs = (k - 1) * math.sqrt(p)
        out.append(_rec(suite, f"weil;p={p};deg={k};psi={a};i={i}",
                        lhs, rhs, lhs <= rhs + 1e-9, t0))
    return out


def _quadruple_energy_oracle(ctx, U: FSubset) -> int:
    """Literal quadruple enumeration: compare every pair sum to every other."""
    s = F.add_vec(ctx, U.elems[:, None], U.elems[None, :]).ravel()
    return int((s[:, None] == s[None, :]).sum())


def _suite_energy_oracle(cfg) -> list:
    out = []
    ctx = build_field(1009)
    rng = np.random.default_rng(cfg.seed)
    for i, U in enumerate(_random_sets(ctx, rng, cfg.trials, 1, 40)):
        t0 = time.perf_counter()
        fast = additive_energy(U).value
        slow = _quadruple_energy_oracle(ctx, U)
        out.append(_rec("energy-oracle", f"quad;q=1009;size={U.size};i={i}",
                        fast, slow, fast == slow, t0))
    for nlen in range(1, 21):
        t0 = time.perf_counter()
        e = additive_energy(interval(ctx, 0, nlen)).value
        closed = (2 * nlen ** 3 + nlen) // 3
        out.append(_rec("energy-oracle", f"ap-closed-form;n={nlen}",
                        e, closed, e == closed, t0))
    for i, U in enumerate(_random_sets(ctx, rng, cfg.trials, 2, 120)):
        t0 = time.perf_counter()
        e_diff = int(np.sum(rep_diff(U, U).counts ** 2))
        e_sum = int(np.sum(rep_sum(U, U).counts ** 2))
        out.append(_rec("energy-oracle", f"sum-diff-identity;size={U.size};i={i}",
                        e_diff, e_sum, e_diff == e_sum, t0))
        t0 = time.perf_counter()
        e = additive_energy(U).value
        floor = U.size ** 4 / sumset(U, U).size
        out.append(_rec("energy-oracle", f"cs-floor;size={U.size};i={i}",
                        e, floor, e >= floor - 1e-9, t0))
    for i in range(cfg.trials):
        B = random_subset(ctx, int(rng.integers(2, 80)), int(rng.integers(2 ** 31)))
        C = random_subset(ctx, int(rng.integers(2, 80)), int(rng.integers(2 ** 31)))
        t0 = time.perf_counter()
        ebc = cross_energy(B, C).value
        eb = additive_energy(B).value
        ec = additive_energy(C).value
        out.append(_rec("energy-oracle", f"cross-cs;B={B.size};C={C.size};i={i}",
                        ebc * ebc, eb * ec, ebc * ebc <= eb * ec, t0))
    ctx7 = build_field(7)
    for d in (1, 2, 3, 6):
        t0 = time.perf_counter()
        e = multiplicative_energy(mult_subgroup(ctx7, d)).value
        out.append(_rec("energy-oracle", f"subgroup-mult-energy;q=7;d={d}",
                        e, d ** 3, e == d ** 3, t0))
    return out


def _suite_ratfunc(cfg) -> list:
    out = []
    rng = np.random.default_rng(cfg.seed)
    for p, n in ((7, 1), (3, 2), (5, 2), (101, 1), (11, 2)):
        ctx = build_field(p, n)
        q = ctx.q
        worst_fiber_ok = True
        t0 = time.perf_counter()
        for _ in range(max(4, cfg.trials // 4)):
            dn = int(rng.integers(0, 4))
            dd = int(rng.integers(0, 3))
            num = [int(rng.integers(0, q)) for _ in range(dn)] + \
                  [int(rng.integers(1, q))]
            den = [int(rng.integers(0, q)) for _ in range(dd)] + \
                  [int(rng.integers(1, q))]
            f = ratfunc(ctx, num, den)
            if f.degree < 1:
                continue
            vals, defined = eval_vec(ctx, f, np.arange(q))
            fibers = np.bincount(vals[defined], minlength=q)
            if int(fibers.max(initial=0)) > f.degree:
                worst_fiber_ok = False
            # canonical form evaluates like the raw quotient off the poles
            nv = poly_eval_vec(ctx, tuple(num), np.arange(q))
            dv = poly_eval_vec(ctx, tuple(den), np.arange(q))
            both = defined & (dv != 0)
            raw = F.mul_vec(ctx, nv, ctx.inv_table[np.where(dv == 0, 1, dv)])
            if not np.array_equal(raw[both], vals[both]):
                worst_fiber_ok = False
        out.append(_rec("ratfunc", f"q={q};fiber-and-normalize",
                        0 if worst_fiber_ok else 1, 0, worst_fiber_ok, t0))
    for p in (3, 5, 7):
        ctx = build_field(p)
        t0 = time.perf_counter()
        coeffs = [1, 2] + [0] * (p - 2) + [1]  # X^p - X + 3X + 1 = X^p + 2X + 1
        flag, lam = is_exceptional(ctx, ratfunc(ctx, coeffs))
        ok = flag and lam == 3 % p
        flag2, _ = is_exceptional(ctx, ratfunc(ctx, [0, 0, 1]))
        flag3, _ = is_exceptional(ctx, parse_ratfunc(ctx, X_INVERSE))
        ok = ok and not flag2 and not flag3
        out.append(_rec("ratfunc", f"p={p};exceptional-detector",
                        0 if ok else 1, 0, ok, t0))
    ctx9 = build_field(3, 2)
    t0 = time.perf_counter()
    frob = ratfunc(ctx9, [0, 0, 0, 1])
    flag, lam = is_exceptional(ctx9, frob)
    add_ok = True
    for a in range(9):
        for b in range(9):
            fa = eval_vec(ctx9, frob, np.array([a]))[0][0]
            fb = eval_vec(ctx9, frob, np.array([b]))[0][0]
            fab = eval_vec(ctx9, frob, np.array([F.add(ctx9, a, b)]))[0][0]
            if F.add(ctx9, int(fa), int(fb)) != int(fab):
                add_ok = False
    ok = flag and add_ok
    out.append(_rec("ratfunc", "q=9;linearized-flagged-and-additive",
                    0 if ok else 1, 0, ok, t0))
    # Weil degeneracy on the witness: |sum psi(f(x) - lam x)| = #non-pole points
    t0 = time.perf_counter()
    ctx5 = build_field(5)
    f5 = ratfunc(ctx5, [1, 2, 0, 0, 0, 1])  # X^5 + 2X + 1 = X^5 - X + 3X + 1
    flag, lam = is_exceptional(ctx5, f5)
    tab = additive_table(ctx5, AdditiveCharacter(1))
    xs = np.arange(5)
    vals, defined = eval_vec(ctx5, f5, xs)
    shifted = F.sub_vec(ctx5, vals, F.mul_vec(ctx5, np.int64(lam), xs))
    degen = abs(tab[shifted[defined]].sum())
    ok = flag and abs(degen - int(defined.sum())) < 1e-9
    out.append(_rec("ratfunc", "p=5;witness-degenerates-weil",
                    degen, int(defined.sum()), ok, t0))
    return out


def _extraction_instances(cfg):
    rng = np.random.default_rng(cfg.seed)
    for p in (257, 1009):
        ctx = build_field(p)
        lo = math.ceil(p ** 0.55)
        for i in range(max(2, cfg.trials // 4)):
            size = int(rng.integers(lo, min(p, 4 * lo)))
            yield ctx, random_subset(ctx, size, int(rng.integers(2 ** 31))), \
                f"p={p};rand;size={size};i={i}"
    ctx = build_field(1009)
    yield ctx, interval(ctx, 0, 64), "p=1009;interval64"
    yield ctx, geometric_progression(ctx, 11, 48), "p=1009;gp48"
    ctx = build_field(4099)
    yield ctx, interval(ctx, 1, 32).union(geometric_progression(ctx, 3, 32)), \
        "p=4099;interval32+gp32"


def _suite_extraction(cfg) -> list:
    out = []
    for ctx, A, inst in _extraction_instances(cfg):
        f = parse_ratfunc(ctx, cfg.fn)
        t0 = time.perf_counter()
        tr = extract_subset(ctx, A, f)
        rho_ok = tr.rho >= 1 and (tr.rho & (tr.rho - 1)) == 0 and tr.rho <= A.size
        subset_ok = bool(np.isin(tr.U_set.elems, A.elems).all())
        rsa = rep_diff(tr.S_set, A).counts
        cert_ok = (tr.U_set.size == 0
                   or int(rsa[tr.U_set.elems].min()) >= tr.certified_u)
        ok = rho_ok and subset_ok and cert_ok
        out.append(_rec("extraction", f"{inst};case={tr.case};certificate",
                        0 if ok else 1, 0, ok, t0))
        # observed constant in U >= E^(1/2)/(A^(1/2) log^(7/4) A) (report)
        t0 = time.perf_counter()
        e_a = additive_energy(A).value
        la = max(math.log(A.size), 1.0)
        floor = e_a ** 0.5 / (A.size ** 0.5 * la ** 1.75)
        out.append(_rec("extraction", f"{inst};size-floor-constant",
                        tr.U_set.size, floor, True, t0))
    return out


def _partition_instances(cfg):
    rng = np.random.default_rng(cfg.seed + 1)
    total = max(3, cfg.trials)
    primes = (257, 1009, 4099)
    for i in range(total):
        p = primes[i % len(primes)]
        ctx = build_field(p)
        lo = math.ceil(p ** 0.55)
        size = int(rng.integers(lo, min(p, 4 * lo)))
        yield ctx, random_subset(ctx, size, int(rng.integers(2 ** 31))), \
            f"p={p};size={size};i={i}"


def _verify_partition(ctx, A, f, res):
    """Independent recomputation of every partition invariant; returns ok."""
    combined = res.S_final.union(res.T_final)
    ok = np.array_equal(combined.elems, A.elems)
    ok = ok and res.S_final.intersect(res.T_final).size == 0
    ok = ok and len(res.iterations) <= A.size
    pieces_union = (subset_for_params(ctx.params, [])
                    if not res.pieces else res.pieces[0])
    for piece in res.pieces[1:]:
        if pieces_union.intersect(piece).size:
            ok = False
        pieces_union = pieces_union.union(piece)
    if res.pieces:
        ok = ok and np.array_equal(pieces_union.elems, res.T_final.elems)
    elif res.T_final.size:
        ok = False
    if not res.trivial_flag and math.isfinite(res.threshold):
        ok = ok and res.e_s_final <= res.threshold
    ok = ok and res.e_f_t ** 0.25 <= sum(
        r.e_f_piece ** 0.25 for r in res.iterations) + 1e-9
    # richness certificates, replayed against the V_i each extraction saw
    V = A
    for rec in res.iterations:
        if rec.kind == "extracted" and rec.trace is not None:
            rsa = rep_diff(rec.trace.S_set, V).counts
            if rec.trace.U_set.size and \
                    int(rsa[rec.trace.U_set.elems].min()) < rec.trace.certified_u:
                ok = False
        if rec.kind == "extracted":
            V = V.minus(rec.trace.U_set if rec.trace else V)
        else:
            V = V.minus(subset_for_params(ctx.params, [int(V.elems[0])]))
    return ok


def _suite_partition(cfg) -> list:
    out = []
    for ctx, A, inst in _partition_instances(cfg):
        f = parse_ratfunc(ctx, cfg.fn)
        t0 = time.perf_counter()
        res = partition(ctx, A, f)
        ok = _verify_partition(ctx, A, f, res)
        out.append(_rec("partition", f"{inst};contract;trivial={res.trivial_flag}",
                        0 if ok else 1, 0, ok, t0))
        t0 = time.perf_counter()
        c2 = res.c2 if res.c2 is not None else 0.0
        out.append(_rec("partition", f"{inst};c2-observed",
                        c2, 1.0, True, t0))
        # forced threshold drives real extractions through the loop
        t0 = time.perf_counter()
        e_a = additive_energy(A).value
        if e_a > 4:
            res_f = partition(ctx, A, f, threshold=max(e_a // 4, A.size))
            ok = _verify_partition(ctx, A, f, res_f)
            out.append(_rec("partition",
                            f"{inst};forced;iters={len(res_f.iterations)}",
                            0 if ok else 1, 0, ok, t0))
    return out


def _degeneracy_check(ctx, B, C):
    """Exact pair degeneracy: for b2+c2 != 0 at most 2 pairs (b1,c1)
    share both the sum and the inverse sum; for b2+c2 = 0 the count equals
    #{b in B : -b in C} exactly."""
    binv = ctx.inv_table[B.elems]
    cinv = ctx.inv_table[C.elems]
    sig = F.add_vec(ctx, B.elems[:, None], C.elems[None, :]).ravel()
    tau = F.add_vec(ctx, binv[:, None], cinv[None, :]).ravel()
    keys = sig.astype(np.int64) * ctx.q + tau
    _, counts = np.unique(keys, return_counts=True)
    nz = sig != 0
    keys_nz = keys[nz]
    uniq, cnt = np.unique(keys_nz, return_counts=True)
    worst = int(cnt.max(initial=0))
    t = int(np.isin(ctx.neg_table[B.elems], C.elems).sum())
    zero_count = int((~nz).sum())
    return worst, t, zero_count


def _suite_charsum_bounds(cfg) -> list:
    out = []
    rng = np.random.default_rng(cfg.seed + 2)
    for qfield in (101, 257):
        ctx = build_field(qfield)
        nz = np.arange(1, qfield)
        for i in range(max(4, cfg.trials)):
            sizes = rng.integers(4, 40, size=3)
            A = subset_for_params(ctx.params,
                                  rng.permutation(nz)[:sizes[0]])
            B = subset_for_params(ctx.params,
                                  rng.permutation(nz)[:sizes[1]])
            C = subset_for_params(ctx.params,
                                  rng.permutation(nz)[:sizes[2]])
            psi = AdditiveCharacter(int(rng.integers(1, qfield)))
            chi = MultiplicativeCharacter(int(rng.integers(1, qfield - 1)))
            inst = f"q={qfield};A={A.size};B={B.size};C={C.size};i={i}"

            t0 = time.perf_counter()
            rs = sum_S(ctx, A, B, C, psi, method="direct")
            rhs = rs.bound("bilinear_S")[0]
            out.append(_rec("charsum-bounds", f"{inst};S-bilinear",
                            rs.magnitude, rhs, rs.magnitude <= rhs + 1e-9, t0))

            t0 = time.perf_counter()
            rs2 = sum_S(ctx, A, B, C, psi, method="convolution")
            err = abs(rs.value - rs2.value)
            tol = 1e-9 * max(rs.terms, 1)
            out.append(_rec("charsum-bounds", f"{inst};S-fastpath-agreement",
                            err, tol, err <= tol, t0))

            t0 = time.perf_counter()
            ebc = cross_energy(B, C).value
            step1 = math.sqrt(A.size * ebc * ctx.q)
            eb = additive_energy(B).value
            ec = additive_energy(C).value
            step2 = math.sqrt(A.size) * (eb * ec) ** 0.25 * math.sqrt(ctx.q)
            ok = (rs.magnitude <= step1 + 1e-9) and (step1 <= step2 + 1e-9)
            out.append(_rec("charsum-bounds", f"{inst};S-energy-chain",
                            rs.magnitude, step2, ok, t0))

            t0 = time.perf_counter()
            rt = sum_T(ctx, A, B, C, chi)
            rhs = rt.bound("bilinear_T")[0]
            out.append(_rec("charsum-bounds", f"{inst};T-bilinear",
                            rt.magnitude, rhs, rt.magnitude <= rhs + 1e-9, t0))

            t0 = time.perf_counter()
            rm = sum_mixed(ctx, A, B, C, chi, psi)
            rhs = rm.bound("mixed_nontrivial")[0]
            out.append(_rec("charsum-bounds", f"{inst};mixed-bound-ratio",
                            rm.magnitude, rhs, True, t0))

            t0 = time.perf_counter()
            worst, t_match, zero_pairs = _degeneracy_check(ctx, B, C)
            deg_ok = worst <= 2 and zero_pairs == t_match
            out.append(_rec("charsum-bounds", f"{inst};degeneracy-pairs",
                            worst, 2, deg_ok, t0))

            t0 = time.perf_counter()
            kk = kloosterman_K(ctx, A, B, C, psi=psi)
            rhs = kk.bound("kloosterman_weighted")[0]
            out.append(_rec("charsum-bounds", f"{inst};K-bound-ratio",
                            kk.magnitude, rhs, True, t0))

    # min(|S|,|T|) over the decomposition half W of B, ratio reports
    ctx = build_field(1009)
    f = parse_ratfunc(ctx, X_INVERSE)
    rng = np.random.default_rng(cfg.seed + 3)
    for i in range(3):
        nz = np.arange(1, 1009)
        A = subset_for_params(ctx.params, rng.permutation(nz)[:40])
        B = subset_for_params(ctx.params, rng.permutation(nz)[:60])
        t0 = time.perf_counter()
        W = larger_half(partition(ctx, B, f))
        psi = AdditiveCharacter(1 + i)
        chi = MultiplicativeCharacter(1 + i)
        s_val = sum_S(ctx, A, W, W, psi).magnitude
        t_val = sum_T(ctx, A, W, W, chi).magnitude
        lhs = min(s_val, t_val)
        rhs = bound_evaluators((A.size, B.size, B.size), {}, ctx.q)["half_set_symmetric"]
        half_ok = W.size >= B.size / 2
        out.append(_rec("charsum-bounds", f"q=1009;half-set-min-ratio;i={i}",
                        lhs, rhs, half_ok, t0))
    return out


def _suite_lemmas(cfg) -> list:
    out = []
    rng = np.random.default_rng(cfg.seed + 4)
    for qfield in (101, 257):
        ctx = build_field(qfield)
        for i in range(max(3, cfg.trials // 4)):
            sets = [random_subset(ctx, int(rng.integers(5, 40)),
                                  int(rng.integers(2 ** 31))) for _ in range(4)]
            deg = int(rng.integers(2, 4))
            coeffs = [int(rng.integers(0, qfield)) for _ in range(deg)] + \
                     [int(rng.integers(1, qfield))]
            f = ratfunc(ctx, coeffs)
            out.append(verify_lemma_prodsum(ctx, *sets, f))
        # all four sets the full field, f = X^2: J = q^3 exactly
        full = field_set(ctx)
        fsq = ratfunc(ctx, [0, 0, 1])
        rec = verify_lemma_prodsum(ctx, full, full, full, full, fsq)
        ok = rec.lhs == 0.0
        out.append(VerificationRecord(rec.suite, rec.instance + ";exact",
                                      rec.lhs, rec.rhs, rec.ratio, ok,
                                      rec.runtime_ms))
        # rich-element bound fed by a real extraction
        A = random_subset(ctx, max(20, qfield // 6), cfg.seed + qfield)
        fx = parse_ratfunc(ctx, cfg.fn)
        tr = extract_subset(ctx, A, fx)
        if tr.U_set.size and tr.certified_u > 0:
            k = max(fx.degree, 1)
            floor = 2 * k * A.size * tr.S_size * tr.U_set.size / \
                (tr.certified_u * ctx.q)
            tau = max(2.0 * floor, 2.0)
            out.append(verify_lemma_rich(ctx, A, tr.S_set, tr.U_set,
                                         tr.certified_u, fx, tau))
    ctx = build_field(257)
    for i in range(max(3, cfg.trials // 2)):
        base = random_subset(ctx, int(rng.integers(20, 120)),
                             int(rng.integers(2 ** 31)))
        parts = max(2, int(rng.integers(2, 6)))
        splits = np.array_split(base.elems, parts)
        family = [subset_for_params(ctx.params, s) for s in splits if len(s)]
        out.append(verify_union_energy(ctx, family))
    return out


def _suite_constructions(cfg) -> list:
    out = []
    for p, lams in ((1009, (100, 200, 300)), (101, (30,))):
        ctx = build_field(p)
        for lam in lams:
            t0 = time.perf_counter()
            A = garaev_set(ctx, lam)
            floor = lam * lam // p
            ok_size = A.size >= floor
            aa = sumset(A, A)
            ok_sum = aa.size <= 2 * lam - 1
            out.append(_rec("constructions", f"garaev;p={p};lam={lam};size",
                            A.size, floor, ok_size, t0))
            t0 = time.perf_counter()
            out.append(_rec("constructions", f"garaev;p={p};lam={lam};sumset",
                            aa.size, 2 * lam - 1, ok_sum, t0))
            t0 = time.perf_counter()
            res = partition(ctx, A, parse_ratfunc(ctx, X_INVERSE))
            e_s = res.e_s_final if res.S_final.size else 0
            floor_e = (res.S_final.size ** 4 / aa.size) if res.S_final.size else 0
            out.append(_rec("constructions",
                            f"garaev;p={p};lam={lam};energy-floor",
                            e_s, floor_e, e_s >= floor_e - 1e-9, t0))
    # the additive lower-bound example: near-full magnitude on a short interval
    ctx = build_field(1009)
    t0 = time.perf_counter()
    m = int(0.1 * math.sqrt(1009))
    J = interval(ctx, 0, m)
    rs = sum_S(ctx, J, J, J, AdditiveCharacter(1), method="direct")
    floor = 0.98 * J.size ** 3
    out.append(_rec("constructions", f"S-lower-bound;p=1009;len={m}",
                    rs.magnitude, floor, rs.magnitude >= floor, t0))
    # convolution image size vs the min(p, A^(3/2)) floor (report-only)
    rng = np.random.default_rng(cfg.seed + 5)
    for i in range(3):
        size = int(rng.integers(12, 40))
        A = random_subset(ctx, size, int(rng.integers(2 ** 31)))
        t0 = time.perf_counter()
        img = convolution_set(ctx, A, A, A)
        floor = min(ctx.q, size ** 1.5)
        out.append(_rec("constructions", f"conv-set;p=1009;size={size};i={i}",
                        img.size, floor, True, t0))
    return out


SUITES = {
    "field-axioms": _suite_field_axioms,
    "characters": _suite_characters,
    "energy-oracle": _suite_energy_oracle,
    "ratfunc": _suite_ratfunc,
    "extraction": _suite_extraction,
    "partition": _suite_partition,
    "charsum-bounds": _suite_charsum_bounds,
    "lemmas": _suite_lemmas,
    "constructions": _suite_constructions,
}


def run_suite(name: str, config: ExperimentConfig | None = None) -> list:
    """Run one named suite (or "all") deterministically from config.seed."""
    cfg = config or ExperimentConfig()
    if name == "all":
        records = []
        for suite_name in SUITES:
            records.extend(SUITES[suite_name](cfg))
        return records
    if name not in SUITES:
        raise ConfigError(f"unknown suite: {name!r} "
                          f"(expected one of {', '.join(SUITES)} or 'all')")
    return SUITES[name](cfg)


def emit_csv(records, path: str, timing: bool = False) -> None:
    """Write records as UTF-8 CSV, deterministically ordered and formatted.

    Header: suite,instance,lhs,rhs,ratio,pass,runtime_ms.  Floats carry 12
    significant digits.  runtime_ms is zeroed unless timing=True, because the
    byte-identical rerun contract cannot hold for wall-clock measurements.
    """
    rows = sorted(records, key=lambda r: (r.suite, r.instance))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("suite,instance,lhs,rhs,ratio,pass,runtime_ms\n")
        for r in rows:
            ms = r.runtime_ms if timing else 0.0
            fh.write(f"{r.suite},{r.instance},{r.lhs:.12g},{r.rhs:.12g},"
                     f"{r.ratio:.12g},{'true' if r.passed else 'false'},"
                     f"{ms:.12g}\n")


def run_experiment(cfg: ExperimentConfig) -> tuple:
    """Run the configured suite(s); returns (records, n_failed)."""
    records = run_suite(cfg.suite, cfg)
    if cfg.output:
        emit_csv(records, cfg.output)
    failed = sum(1 for r in records if not r.passed)
    return records, failed
