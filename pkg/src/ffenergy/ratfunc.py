"""Rational functions over GF(q): canonical form, evaluation, exceptionality.

A polynomial is a tuple of field-element indices, low degree first, with no
trailing zeros (the zero polynomial is the empty tuple).  A rational function
is a coprime pair with monic denominator; its degree is max(deg num, deg den).
Poles are values, not errors: evaluation returns the POLE marker and every
downstream sum or image simply skips those points.

Exceptionality (the Artin-Schreier-plus-linear shape g(X)^p - g(X) + l*X + m
that the decomposition machinery excludes) is decided by a trace criterion: f is
flagged iff its denominator is a p-th power (a necessary condition for the
formal shape; for a polynomial this is vacuous) and some l makes
Tr(f(x) - l*x) constant on non-pole points.  For polynomial f this matches
the formal definition exactly (additive Hilbert 90); for rational f with
poles it is adopted as the operative predicate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BadArgument, DegenerateFunction, ZeroDenominator
from .field import FieldCtx, add_vec, inv, mul, mul_vec, neg_vec


class _PoleType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POLE"


POLE = _PoleType()


@dataclass(frozen=True)
class Polynomial:
    """Coefficient vector over the field, low degree first, trimmed."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = self.coeffs
        if c and c[-1] == 0:
            raise BadArgument("polynomial has trailing zero coefficients")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class RationalFunction:
    """Coprime num/den with monic den; degree = max of the two degrees."""

    num: Polynomial
    den: Polynomial
    degree: int


def make_poly(coeffs) -> Polynomial:
    c = list(int(v) for v in coeffs)
    while c and c[-1] == 0:
        c.pop()
    return Polynomial(tuple(c))


# ---------------------------------------------------------------------------
# coefficient-tuple arithmetic (indices in GF(q), via the ctx tables)
# ---------------------------------------------------------------------------

def _padd(ctx, f, g):
    m = max(len(f), len(g))
    out = []
    for i in range(m):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out.append(int(add_vec(ctx, np.int64(a), np.int64(b))))
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _pscale(ctx, f, c):
    if c == 0:
        return ()
    out = [mul(ctx, a, c) for a in f]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _pmul(ctx, f, g):
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = int(add_vec(ctx, np.int64(out[i + j]),
                                     np.int64(mul(ctx, a, b))))
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _pdivmod(ctx, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    glead_inv = inv(ctx, g[-1])
    quot = [0] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and f:
        lead = f[-1]
        if lead != 0:
            coef = mul(ctx, lead, glead_inv)
            shift = len(f) - 1 - dg
            quot[shift] = coef
            for i, gc in enumerate(g):
                t = mul(ctx, coef, gc)
                f[shift + i] = int(add_vec(ctx, np.int64(f[shift + i]),
                                           ctx.neg_table[t]))
        while f and f[-1] == 0:
            f.pop()
        if not f:
            break
    while quot and quot[-1] == 0:
        quot.pop()
    return tuple(quot), tuple(f)


def _pgcd(ctx, f, g):
    while g:
        _, r = _pdivmod(ctx, f, g)
        f, g = g, r
    if f:
        f = _pscale(ctx, f, inv(ctx, f[-1]))  # monic gcd
    return f


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def normalize(ctx: FieldCtx, g: Polynomial, h: Polynomial) -> RationalFunction:
    """Canonical form of g/h: divide out gcd, scale the denominator monic."""
    if h.is_zero:
        raise ZeroDenominator("denominator is the zero polynomial")
    num, den = g.coeffs, h.coeffs
    if num:
        d = _pgcd(ctx, num, den)
        if len(d) > 1:
            num, _ = _pdivmod(ctx, num, d)
            den, _ = _pdivmod(ctx, den, d)
    lead_inv = inv(ctx, den[-1])
    den = _pscale(ctx, den, lead_inv)
    num = _pscale(ctx, num, lead_inv)
    np_, dp_ = make_poly(num), make_poly(den)
    return RationalFunction(np_, dp_, max(np_.degree, dp_.degree, 0))


def ratfunc(ctx: FieldCtx, num_coeffs, den_coeffs=(1,)) -> RationalFunction:
    """Build a canonical rational function from raw coefficient iterables."""
    return normalize(ctx, make_poly(num_coeffs), make_poly(den_coeffs))


def poly_eval_vec(ctx: FieldCtx, coeffs, xs):
    """Horner evaluation of a coefficient tuple at an index array."""
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros_like(xs)
    for c in reversed(coeffs):
        acc = add_vec(ctx, mul_vec(ctx, acc, xs), np.int64(c))
    return acc


def eval_vec(ctx: FieldCtx, f: RationalFunction, xs):
    """Evaluate f at an index array; returns (values, defined_mask).

    values[i] is arbitrary where defined_mask[i] is False (a pole).
    """
    xs = np.asarray(xs, dtype=np.int64)
    num = poly_eval_vec(ctx, f.num.coeffs, xs)
    den = poly_eval_vec(ctx, f.den.coeffs, xs)
    defined = den != 0
    safe_den = np.where(defined, den, 1)
    vals = mul_vec(ctx, num, ctx.inv_table[safe_den])
    return np.where(defined, vals, 0), defined


def eval_at(ctx: FieldCtx, f: RationalFunction, x: int):
    """f(x), or the POLE marker when the denominator vanishes."""
    vals, defined = eval_vec(ctx, f, np.array([x], dtype=np.int64))
    return int(vals[0]) if defined[0] else POLE


def apply_to_set(ctx: FieldCtx, f: RationalFunction, U):
    """Image set {f(u) : u in U, u not a pole}, deduplicated.

    The multiset size drop (non-pole inputs minus image size) is available as
    (#U - poles) - len(result); fibers have size at most deg f.
    """
    from .sets import FSubset

    vals, defined = eval_vec(ctx, f, U.elems)
    return FSubset.from_array(ctx.params, vals[defined])


def is_exceptional(ctx: FieldCtx, f: RationalFunction):
    """Detect the excluded shape; returns (flag, witness_lambda_or_None).

    A True verdict means some l in GF(q) makes x -> Tr(f(x) - l*x) constant
    over non-pole x, and the denominator is a p-th power (every formal
    g^p - g + l*X + m has denominator v^p, so e.g. 1/X is never flagged).
    """
    vals, defined = eval_vec(ctx, f, np.arange(ctx.q, dtype=np.int64))
    if not defined.any():
        raise DegenerateFunction("rational function with no non-pole points")
    for e, c in enumerate(f.den.coeffs):
        if c != 0 and e % ctx.p != 0:
            return False, None
    tf = ctx.trace_table[vals]
    lam = kernels.exceptional_scan(tf, defined, ctx.trace_table, ctx.q,
                                   ctx.dlog_table, ctx.exp_table, ctx.p)
    if lam >= 0:
        return True, int(lam)
    return False, None


# ---------------------------------------------------------------------------
# textual syntax: low-degree-first comma lists, "num/den" for quotients
# ---------------------------------------------------------------------------

def parse_ratfunc(ctx: FieldCtx, text: str) -> RationalFunction:
    """Parse "c0,c1,..." or "c0,c1/d0,d1" into a canonical rational function."""
    text = text.strip()
    if "/" in text:
        num_s, den_s = text.split("/", 1)
    else:
        num_s, den_s = text, "1"
    try:
        num = [int(t) for t in num_s.split(",") if t.strip() != ""]
        den = [int(t) for t in den_s.split(",") if t.strip() != ""]
    except ValueError as e:
        raise BadArgument(f"bad rational function syntax: {text!r}") from e
    for c in num + den:
        if not 0 <= c < ctx.q:
            raise BadArgument(f"coefficient {c} outside [0, {ctx.q})")
    return ratfunc(ctx, num, den)


def format_ratfunc(f: RationalFunction) -> str:
    num = ",".join(str(c) for c in f.num.coeffs) or "0"
    if f.den.coeffs == (1,):
        return num
    return num + "/" + ",".join(str(c) for c in f.den.coeffs)
