"""Low-energy decomposition: threshold function, dyadic extraction, partition.

The pipeline splits a set A into S and T with E(S) below A^3/M(A) and T a
disjoint union of extracted pieces whose images under f have small additive
energy.  M is the two-branch threshold balancing the error terms; logarithms
are natural with a floor of 1 (the source statements absorb constants, so any
fixed base is faithful).

At desk scale M(A) <= 1 for every reachable (A, q), which makes the stated
threshold A^3/M(A) at least A^3 >= E(A): default-threshold runs terminate
immediately with the trivial partition (S = A, T = empty), flagged as such.
partition() therefore accepts an explicit threshold override so experiments
and tests can drive the loop through real extractions.

A single invocation is sequential (iterations are data-dependent); distinct
invocations are independent and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy import additive_energy, f_energy, rep_sum
from .errors import BadArgument, ExceptionalFunction, SetTooSmall
from .field import FieldCtx, add_vec
from .ratfunc import RationalFunction, is_exceptional
from .sets import FSubset


@dataclass(frozen=True)
class ThresholdParams:
    """Fixed numeric conventions of the threshold and the dyadic buckets."""

    log_floor: float = 1.0
    dyadic_base: int = 2


def m_of_z(z: float, q: float) -> float:
    """min{ sqrt(q)/(sqrt(z) ln(z)^{11/4}),  z^{4/5}/(q^{2/5} ln(z)^{31/10}) }.

    ln(z) is clamped below at 1.
    """
    if z <= 1:
        raise BadArgument(f"M(Z) needs Z > 1, got {z}")
    if q < 2:
        raise BadArgument(f"M(Z) needs q >= 2, got {q}")
    lz = max(math.log(z), 1.0)
    branch1 = math.sqrt(q) / (math.sqrt(z) * lz ** 2.75)
    branch2 = z ** 0.8 / (q ** 0.4 * lz ** 3.1)
    return min(branch1, branch2)


@dataclass(frozen=True)
class ExtractionTrace:
    """Constructive record of one dyadic extraction.

    rho: dyadic richness level of the popular sumset bucket S_set.
    case: "I" (columns kept directly) or "II" (second bucketing over rows).
    s_or_t: the richness parameter u; every x in U_set satisfies
        r_{S,-A}(x) >= certified_u (recomputed independently in tests).
    """

    rho: int
    S_set: FSubset
    S_size: int
    P_size: int
    case: str
    s_or_t: int
    U_set: FSubset
    certified_u: int


@dataclass(frozen=True)
class IterationRecord:
    v_size: int
    e_v: int
    q_size: int
    e_f_piece: int
    kind: str  # "extracted" | "guard"
    trace: ExtractionTrace | None = None


@dataclass(frozen=True)
class DecompositionResult:
    S_final: FSubset
    T_final: FSubset
    pieces: tuple
    iterations: tuple
    threshold: float
    trivial_flag: bool
    m_value: float | None
    e_s_final: int
    e_f_t: int
    aggregate_bound: float

    @property
    def c1(self) -> float | None:
        """Observed constant E(S) * M(A) / A^3 (None when M is undefined)."""
        return self._const(self.e_s_final)

    @property
    def c2(self) -> float | None:
        """Observed constant E(f(T)) * M(A) / A^3."""
        return self._const(self.e_f_t)

    def _const(self, e):
        a = self.S_final.size + self.T_final.size
        if self.m_value is None or a == 0:
            return None
        return e * self.m_value / a ** 3


def _pick_bucket(values, weight):
    """Group positive values into dyadic classes [2^j, 2^{j+1}) and return
    (level, member_mask) maximizing weight(level, count); ties take the
    smaller level.

    weight: "square" scores level^2 * count, "linear" scores level * count.
    """
    pos = values >= 1
    if not pos.any():
        return 0, np.zeros_like(pos)
    levels = np.zeros_like(values)
    levels[pos] = 2 ** np.floor(np.log2(values[pos])).astype(np.int64)
    best_level, best_score = 0, -1
    for lv in np.unique(levels[pos]):
        cnt = int((levels == lv).sum())
        score = (int(lv) ** 2 if weight == "square" else int(lv)) * cnt
        if score > best_score:
            best_level, best_score = int(lv), score
    return best_level, levels == best_level


def _column_counts(ctx, xs, ys, in_s):
    """For each x in xs: #{y in ys : x + y in S} (chunked A x A gather)."""
    out = np.empty(len(xs), dtype=np.int64)
    rows = max(1, (1 << 22) // max(1, len(ys)))
    for lo in range(0, len(xs), rows):
        sums = add_vec(ctx, xs[lo:lo + rows, None], ys[None, :])
        out[lo:lo + rows] = in_s[sums].sum(axis=1)
    return out


def _extract(ctx: FieldCtx, A: FSubset) -> ExtractionTrace:
    """Constructive dyadic extraction (no exceptionality gate)."""
    a = A.elems
    counts = rep_sum(A, A).counts

    # (1) popular dyadic sumset bucket: maximize rho^2 * |bucket|
    sum_support = np.nonzero(counts)[0]
    r_vals = counts[sum_support]
    rho, mask = _pick_bucket(r_vals, weight="square")
    s_elems = sum_support[mask]
    S_set = FSubset.from_array(ctx.params, s_elems)

    # (2) point set P = {(a,b) in A^2 : a+b in S}; P = sum of r over S
    in_s = np.zeros(ctx.q, dtype=bool)
    in_s[s_elems] = True
    P_size = int(counts[s_elems].sum())

    # (3) column bucket: A_x = #{y : x+y in S}, maximize |V| * s
    col = _column_counts(ctx, a, a, in_s)
    s_level, v_mask = _pick_bucket(col, weight="linear")
    v_elems = a[v_mask]

    log_a = max(math.log(A.size), 1.0)
    if len(v_elems) >= s_level / math.sqrt(log_a):
        u_set = FSubset.from_array(ctx.params, v_elems)
        return ExtractionTrace(rho, S_set, S_set.size, P_size, "I",
                               s_level, u_set, s_level)

    # (4) case II: rows of P restricted to columns V
    row = _column_counts(ctx, a, v_elems, in_s)  # B_y over y in A
    t_level, w_mask = _pick_bucket(row, weight="linear")
    w_elems = a[w_mask]
    u_set = FSubset.from_array(ctx.params, w_elems)
    return ExtractionTrace(rho, S_set, S_set.size, P_size, "II",
                           t_level, u_set, t_level)


def extract_subset(ctx: FieldCtx, A: FSubset,
                   f: RationalFunction) -> ExtractionTrace:
    """Extract a subset U of A with certified richness r_{S,-A}(x) >= u.

    Raises SetTooSmall for |A| < 2 and ExceptionalFunction when f has the
    excluded Artin-Schreier-plus-linear shape.
    """
    if A.size < 2:
        raise SetTooSmall(f"extraction needs |A| >= 2, got {A.size}")
    flag, lam = is_exceptional(ctx, f)
    if flag:
        raise ExceptionalFunction(f"f is excluded (witness lambda = {lam})")
    return _extract(ctx, A)


def partition(ctx: FieldCtx, A: FSubset, f: RationalFunction,
              threshold: float | None = None) -> DecompositionResult:
    """Iteratively split A into S (low E) and T (union of extracted pieces).

    Stops as soon as E(V_i) <= threshold, which defaults to A^3/M(A); the
    remaining V_i becomes S and the extracted pieces form T.  Extractions
    that make no progress (empty, or all of V_i) degrade to moving the
    smallest element of V_i into its own piece, so at most |A| iterations run.

    An explicit threshold forces the loop into real extractions at desk scale
    (see module docstring); trivial_flag is only meaningful for the default.
    """
    flag, lam = is_exceptional(ctx, f)
    if flag:
        raise ExceptionalFunction(f"f is excluded (witness lambda = {lam})")

    a_size = A.size
    if threshold is None:
        if a_size <= 1:
            m_val, thr, trivial = None, math.inf, True
        else:
            m_val = m_of_z(a_size, ctx.q)
            thr = a_size ** 3 / m_val
            trivial = m_val <= 1.0
    else:
        if threshold <= 0:
            raise BadArgument("threshold override must be positive")
        m_val = m_of_z(a_size, ctx.q) if a_size > 1 else None
        thr, trivial = float(threshold), False

    V = A
    pieces: list[FSubset] = []
    iters: list[IterationRecord] = []
    s_final = None
    for _ in range(a_size + 1):
        e_v = additive_energy(V).value if V.size else 0
        if e_v <= thr:
            s_final = V
            break
        if V.size >= 2:
            trace = _extract(ctx, V)
            piece = trace.U_set
            kind = "extracted"
        else:
            piece, kind, trace = None, "guard", None
        if piece is None or piece.size == 0 or piece.size == V.size:
            piece = FSubset.from_array(ctx.params, V.elems[:1])
            kind, trace = "guard", None
        e_fp = f_energy(ctx, f, piece).value
        iters.append(IterationRecord(V.size, e_v, piece.size, e_fp, kind, trace))
        pieces.append(piece)
        V = V.minus(piece)
    if s_final is None:
        raise AssertionError("partition failed to terminate; unreachable")

    t_elems = (np.concatenate([p.elems for p in pieces])
               if pieces else np.empty(0, dtype=np.int64))
    T = FSubset.from_array(ctx.params, t_elems)
    if s_final.size + T.size != a_size:
        raise AssertionError("partition is not disjoint; unreachable")

    e_s = additive_energy(s_final).value if s_final.size else 0
    e_f_t = f_energy(ctx, f, T).value if T.size else 0
    agg = float(sum(r.e_f_piece ** 0.25 for r in iters)) ** 4
    return DecompositionResult(
        S_final=s_final, T_final=T, pieces=tuple(pieces),
        iterations=tuple(iters), threshold=thr,
        trivial_flag=(trivial and not iters), m_value=m_val,
        e_s_final=e_s, e_f_t=e_f_t, aggregate_bound=agg)


def larger_half(result: DecompositionResult) -> FSubset:
    """The larger of S and T (S on ties), the W of the sum-vs-product bounds."""
    if result.S_final.size >= result.T_final.size:
        return result.S_final
    return result.T_final
