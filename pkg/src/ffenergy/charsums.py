"""Triple character sums over the convolution ab+ac+bc, and their bounds.

Everything is evaluated exactly: the additive sum S_psi, the multiplicative
sum T_chi, the mixed sum, the weighted Kloosterman bilinear form K, and the
convolution image set.  Each result carries a bound report, a list of
(name, bound value, |sum|/bound) entries for the right-hand sides the sum is
compared against; implied constants are set to 1 and ratios are what the
verification suites record.

S_psi additionally has an inner-convolution fast path, O(BC + Aq) instead of
O(ABC), grouping (b,c) pairs by b+c; it must agree with the literal triple
loop to 1e-9 per term and the tests pin that.  Accumulation order is fixed
(sorted set order) so results are reproducible bit for bit; triple sums may
be partitioned over the outer set across threads with a deterministic
reduction, at the price of last-ulp differences only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .characters import (AdditiveCharacter, MultiplicativeCharacter,
                         additive_table, multiplicative_table)
from .decompose import m_of_z
from .energy import additive_energy
from .errors import BadArgument, EmptyC
from .field import FieldCtx
from .sets import FSubset, inverse_set


@dataclass(frozen=True)
class WeightVector:
    """Complex weights supported on (and aligned with) a subset's elements."""

    support: FSubset
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.support.size:
            raise BadArgument("weight vector length differs from support size")

    @classmethod
    def ones(cls, support: FSubset) -> "WeightVector":
        return cls(support, np.ones(support.size, dtype=np.complex128))


def weight_norms(w: WeightVector, sigma) -> float:
    """L_sigma norm; sigma = math.inf gives the sup norm."""
    mags = np.abs(w.values)
    if sigma == math.inf:
        return float(mags.max(initial=0.0))
    if sigma <= 0:
        raise BadArgument(f"norm order must be positive, got {sigma}")
    return float((mags ** sigma).sum() ** (1.0 / sigma))


@dataclass(frozen=True)
class SumResult:
    value: complex
    magnitude: float
    terms: int
    bound_report: tuple

    def bound(self, name: str):
        for n, v, r in self.bound_report:
            if n == name:
                return v, r
        return None


def _plumbing(ctx):
    return (ctx.q, ctx.p, ctx.n, ctx.digits, ctx.pw, ctx.dlog_table,
            ctx.exp_table)


def _triple(ctx, A, B, C, table):
    return kernels.triple_conv_sum(A.elems, B.elems, C.elems, table,
                                   *_plumbing(ctx))


def _conv_sum(ctx, A, B, C, table):
    """Fast path for additive tables: sum_u F_A(u) G(u), where G groups the
    (b,c) pairs by u = b+c and F_A(u) = sum_a table[a*u]."""
    from .field import add_vec, mul_vec

    if min(A.size, B.size, C.size) == 0:
        return 0j
    s_bc = add_vec(ctx, B.elems[:, None], C.elems[None, :]).ravel()
    p_bc = mul_vec(ctx, B.elems[:, None], C.elems[None, :]).ravel()
    G = np.zeros(ctx.q, dtype=np.complex128)
    np.add.at(G, s_bc, table[p_bc])
    support = np.unique(s_bc)
    FA = table[mul_vec(ctx, A.elems[:, None], support[None, :])].sum(axis=0)
    return complex(G[support] @ FA)


def _report(mag, entries):
    return tuple((name, float(v), (mag / v if v > 0 else math.inf))
                 for name, v in entries if v is not None)


def sum_S(ctx: FieldCtx, A: FSubset, B: FSubset, C: FSubset,
          psi: AdditiveCharacter, method: str = "auto") -> SumResult:
    """S_psi(A,B,C) = sum psi(ab+ac+bc) over A x B x C.

    method: "direct" (triple loop kernel), "convolution" (O(BC+Aq) grouping),
    or "auto" (cost-based choice).  Both agree to 1e-9 per term.
    """
    table = additive_table(ctx, psi)
    if method == "auto":
        direct_cost = A.size * B.size * C.size
        conv_cost = B.size * C.size + (A.size + 2) * ctx.q
        method = "convolution" if conv_cost < direct_cost else "direct"
    if method == "convolution":
        val = _conv_sum(ctx, A, B, C, table)
    elif method == "direct":
        val = complex(_triple(ctx, A, B, C, table))
    else:
        raise BadArgument(f"unknown method {method!r}")
    terms = A.size * B.size * C.size
    mag = abs(val)
    entries = []
    if not psi.is_trivial and terms:
        entries.append(("bilinear_S",
                        A.size * math.sqrt(B.size * C.size * ctx.q)))
        eb = additive_energy(B).value
        ec = additive_energy(C).value
        entries.append(("energy_S",
                        math.sqrt(A.size) * (eb * ec) ** 0.25 * math.sqrt(ctx.q)))
    return SumResult(val, mag, terms, _report(mag, entries))


def sum_T(ctx: FieldCtx, A: FSubset, B: FSubset, C: FSubset,
          chi: MultiplicativeCharacter) -> SumResult:
    """T_chi(A,B,C) = sum chi(ab+ac+bc), with chi(0) = 0."""
    table = multiplicative_table(ctx, chi)
    val = complex(_triple(ctx, A, B, C, table))
    terms = A.size * B.size * C.size
    mag = abs(val)
    entries = []
    if not chi.is_trivial_in(ctx) and terms:
        if 0 not in A:
            entries.append(("bilinear_T",
                            A.size * math.sqrt(B.size * C.size * ctx.q)))
        if 0 not in A and 0 not in B and 0 not in C:
            ebi = additive_energy(inverse_set(ctx, B)).value
            eci = additive_energy(inverse_set(ctx, C)).value
            entries.append(("energy_T",
                            math.sqrt(A.size) * (ebi * eci) ** 0.25
                            * math.sqrt(ctx.q)
                            + math.sqrt(A.size) * B.size * C.size))
    return SumResult(val, mag, terms, _report(mag, entries))


def sum_mixed(ctx: FieldCtx, A: FSubset, B: FSubset, C: FSubset,
              chi: MultiplicativeCharacter,
              psi: AdditiveCharacter) -> SumResult:
    """Mixed sum: chi(ab+ac+bc) psi(ab+ac+bc) over the triple product."""
    table = multiplicative_table(ctx, chi) * additive_table(ctx, psi)
    val = complex(_triple(ctx, A, B, C, table))
    terms = A.size * B.size * C.size
    mag = abs(val)
    entries = []
    nontrivial = not chi.is_trivial_in(ctx) and not psi.is_trivial
    zero_free = 0 not in A and 0 not in B and 0 not in C
    if nontrivial and zero_free and terms:
        entries.append(("mixed_nontrivial",
                        math.sqrt(A.size * B.size * C.size * ctx.q)
                        + math.sqrt(A.size) * B.size * C.size * ctx.q ** 0.25))
    return SumResult(val, mag, terms, _report(mag, entries))


def kloosterman_K(ctx: FieldCtx, A: FSubset, B: FSubset, C: FSubset,
                  alpha: WeightVector | None = None,
                  beta: WeightVector | None = None,
                  gamma: WeightVector | None = None,
                  psi: AdditiveCharacter = None) -> SumResult:
    """K = sum_{a,b} alpha_a beta_b |sum_c gamma_c psi(ac + b c^{-1})|^2."""
    if C.size == 0:
        raise EmptyC("Kloosterman form needs a nonempty C")
    if 0 in C:
        raise BadArgument("C must avoid 0 (c^{-1} appears in the phase)")
    if psi is None or psi.is_trivial:
        raise BadArgument("psi must be a nontrivial additive character")
    alpha = alpha or WeightVector.ones(A)
    beta = beta or WeightVector.ones(B)
    gamma = gamma or WeightVector.ones(C)
    for w, s in ((alpha, A), (beta, B), (gamma, C)):
        if w.support.params != s.params or w.support.size != s.size or \
                not np.array_equal(w.support.elems, s.elems):
            raise BadArgument("weight support must match the summation set")
    table = additive_table(ctx, psi)
    val = complex(kernels.kloosterman_sum(
        A.elems, B.elems, C.elems, alpha.values, beta.values, gamma.values,
        table, ctx.q, ctx.dlog_table, ctx.exp_table, ctx.inv_table))
    terms = A.size * B.size * C.size ** 2
    mag = abs(val)
    entries = []
    if C.size >= 2:
        a1 = weight_norms(alpha, 1)
        a2 = weight_norms(alpha, 2)
        b1 = weight_norms(beta, 1)
        b2 = weight_norms(beta, 2)
        ginf = weight_norms(gamma, math.inf)
        mc = m_of_z(C.size, ctx.q)
        entries.append(("kloosterman_weighted",
                        (a1 * b2 + a2 * b1) * ginf ** 2 * math.sqrt(ctx.q)
                        * C.size ** 1.5 / math.sqrt(mc)))
    return SumResult(val, mag, terms, _report(mag, entries))


def convolution_set(ctx: FieldCtx, A: FSubset, B: FSubset,
                    C: FSubset) -> FSubset:
    """C(A,B,C) = {ab+ac+bc}; compare its size to min(p, A^{3/2}) when
    A = B = C (the sum-product floor for the symmetric case)."""
    mask = kernels.conv_image_mask(A.elems, B.elems, C.elems, *_plumbing(ctx))
    return FSubset.from_array(ctx.params, np.nonzero(mask)[0])


def bound_evaluators(sizes, energies, q) -> dict:
    """Named right-hand sides, evaluated exactly as displayed (constants 1).

    sizes: (A, B, C).  energies: mapping with any of E_B, E_C, E_B_inv,
    E_C_inv.  Entries whose inputs are missing or whose M(Z) is undefined
    (size < 2) are omitted.
    """
    a, b, c = sizes
    en = dict(energies or {})
    out = {
        "bilinear_S": a * math.sqrt(b * c * q),
        "bilinear_T": a * math.sqrt(b * c * q),
        "mixed_nontrivial": math.sqrt(a * b * c * q) + math.sqrt(a) * b * c * q ** 0.25,
    }
    if "E_B" in en and "E_C" in en:
        out["energy_S"] = (math.sqrt(a) * (en["E_B"] * en["E_C"]) ** 0.25
                          * math.sqrt(q))
    if "E_B_inv" in en and "E_C_inv" in en:
        out["energy_T"] = (math.sqrt(a) * (en["E_B_inv"] * en["E_C_inv"]) ** 0.25
                          * math.sqrt(q) + math.sqrt(a) * b * c)
    if b >= 2:
        out["half_set_symmetric"] = math.sqrt(a) * b ** 1.5 * math.sqrt(q) / math.sqrt(
            m_of_z(b, q))
    if b >= 2 and c >= 2:
        out["half_set_asymmetric"] = (math.sqrt(a) * (b * c) ** 0.75 * math.sqrt(q)
                        / max(m_of_z(b, q), m_of_z(c, q)) ** 0.25)
    if c >= 2:
        # unit-weight specialization of the Kloosterman bound
        out["kloosterman_weighted"] = ((a * math.sqrt(b) + math.sqrt(a) * b) * math.sqrt(q)
                        * c ** 1.5 / math.sqrt(m_of_z(c, q)))
    return out
