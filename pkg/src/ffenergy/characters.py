"""Additive and multiplicative characters of GF(q) as complex evaluators.

The additive character with parameter a is psi_a(x) = e(Tr(a*x)/p), realized
through the field trace; the multiplicative character with index j is
chi_j(g^k) = e(j*k/(q-1)) for the canonical generator g, with chi_j(0) = 0 by
convention.  Ranging a over GF(q) and j over Z/(q-1) realizes every character
of each kind exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FieldCtx, mul, trace

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class AdditiveCharacter:
    """psi_a; trivial iff a == 0."""

    a: int

    @property
    def is_trivial(self) -> bool:
        return self.a == 0


@dataclass(frozen=True)
class MultiplicativeCharacter:
    """chi_j with j taken modulo q-1; trivial iff j == 0 (mod q-1)."""

    j: int

    def is_trivial_in(self, ctx: FieldCtx) -> bool:
        return self.j % (ctx.q - 1) == 0


def eval_additive(ctx: FieldCtx, chi: AdditiveCharacter, x: int) -> complex:
    """psi_a(x) = e^(2 pi i Tr(a x) / p)."""
    t = trace(ctx, mul(ctx, chi.a, x))
    return complex(np.exp(2j * np.pi * t / ctx.p))


def eval_multiplicative(ctx: FieldCtx, chi: MultiplicativeCharacter,
                        x: int) -> complex:
    """chi_j(x) = e^(2 pi i j dlog(x) / (q-1)), with chi_j(0) = 0."""
    if x == 0:
        return 0j
    k = int(ctx.dlog_table[x])
    return complex(np.exp(2j * np.pi * ((chi.j * k) % (ctx.q - 1)) / (ctx.q - 1)))


def additive_table(ctx: FieldCtx, chi: AdditiveCharacter) -> np.ndarray:
    """psi_a at every field element, as a length-q complex128 array."""
    from .field import mul_vec, elements

    tr = ctx.trace_table[mul_vec(ctx, chi.a, elements(ctx))]
    return np.exp((2j * np.pi / ctx.p) * tr)


def multiplicative_table(ctx: FieldCtx, chi: MultiplicativeCharacter) -> np.ndarray:
    """chi_j at every field element (0 at index 0), length-q complex128."""
    q1 = ctx.q - 1
    out = np.zeros(ctx.q, dtype=np.complex128)
    ks = (chi.j * np.arange(q1, dtype=np.int64)) % q1
    out[ctx.exp_table] = np.exp((2j * np.pi / q1) * ks)
    return out


def all_additive(ctx: FieldCtx) -> list[AdditiveCharacter]:
    return [AdditiveCharacter(a) for a in range(ctx.q)]


def all_multiplicative(ctx: FieldCtx) -> list[MultiplicativeCharacter]:
    return [MultiplicativeCharacter(j) for j in range(ctx.q - 1)]
