"""Representation counts and additive/multiplicative/cross energies.

All energies are exact integers computed from O(|U| |V|) representation maps
(dense count arrays indexed by field element); the quartic quadruple
enumeration exists only as a test oracle.  Representation maps may be built in
parallel over disjoint input chunks and merged; the result is identical to the
sequential computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .field import FieldCtx
from .ratfunc import RationalFunction, eval_vec
from .sets import FSubset, ctx_of


@dataclass(frozen=True)
class RepCounts:
    """Dense representation map: counts[x] = number of solutions at x."""

    counts: np.ndarray
    total: int

    def as_dict(self):
        nz = np.nonzero(self.counts)[0]
        return {int(x): int(self.counts[x]) for x in nz}


@dataclass(frozen=True)
class EnergyReport:
    value: int
    kind: str
    operands: str


def _pair_add(ctx, u, v):
    return kernels.pair_add_counts(u, v, ctx.q, ctx.p, ctx.n, ctx.digits, ctx.pw)


def rep_sum(U: FSubset, V: FSubset) -> RepCounts:
    """r_{U,V}(x) = #{(u,v) : u + v = x}."""
    ctx = ctx_of(U)
    counts = _pair_add(ctx, U.elems, V.elems)
    return RepCounts(counts, U.size * V.size)


def rep_diff(U: FSubset, V: FSubset) -> RepCounts:
    """r_{U,-V}(x) = #{(u,v) : u - v = x}."""
    ctx = ctx_of(U)
    counts = _pair_add(ctx, U.elems, ctx.neg_table[V.elems])
    return RepCounts(counts, U.size * V.size)


def rep_f(ctx: FieldCtx, f: RationalFunction, U: FSubset) -> RepCounts:
    """r_U(f;x) = #{(u,v) in U^2 : f(u) + f(v) = x}, poles skipped."""
    vals, defined = eval_vec(ctx, f, U.elems)
    fu = vals[defined]
    counts = _pair_add(ctx, fu, fu)
    return RepCounts(counts, int(len(fu)) ** 2)


def _sq_sum(counts) -> int:
    return int(np.sum(counts * counts, dtype=np.int64))


def additive_energy(U: FSubset) -> EnergyReport:
    """E(U) = #{u1+u2 = u3+u4} = sum_x r_{U,-U}(x)^2."""
    return EnergyReport(_sq_sum(rep_diff(U, U).counts), "additive", _ops(U))


def cross_energy(B: FSubset, C: FSubset) -> EnergyReport:
    """E(B,C) = #{b1+c1 = b2+c2} = sum_x r_{B,C}(x)^2."""
    return EnergyReport(_sq_sum(rep_sum(B, C).counts), "cross", _ops(B, C))


def multiplicative_energy(U: FSubset) -> EnergyReport:
    """E^x(U) over u1 u2 = u3 u4; quadruples with zeros counted literally."""
    ctx = ctx_of(U)
    counts = kernels.pair_mul_counts(U.elems, U.elems, ctx.q,
                                     ctx.dlog_table, ctx.exp_table)
    return EnergyReport(_sq_sum(counts), "multiplicative", _ops(U))


def f_energy(ctx: FieldCtx, f: RationalFunction, U: FSubset) -> EnergyReport:
    """E(f(U)) of the image set, poles skipped before deduplication."""
    from .ratfunc import apply_to_set

    img = apply_to_set(ctx, f, U)
    return EnergyReport(additive_energy(img).value, "f-energy", _ops(U))


def sumset(U: FSubset, V: FSubset) -> FSubset:
    """U + V as a set."""
    counts = rep_sum(U, V).counts
    return FSubset.from_array(U.params, np.nonzero(counts)[0])


def _ops(*sets: FSubset) -> str:
    return ";".join(f"size={s.size}" for s in sets)
