"""Deterministic generators for structured subsets of GF(q).

FSubset is a sorted, deduplicated index array with a back-reference to the
FieldParams it lives in.  Generators cover the families the experiments need:
intervals (prime fields), geometric progressions, multiplicative subgroups,
additive subspaces, seeded random subsets, inverse images, and the
interval-meets-inverted-interval pigeonhole construction.

The seeded PRG is pinned: numpy PCG64 streams, subsets drawn as the leading
entries of a full permutation, so identical (q, size, seed) reproduces the
same set on any platform.

CLI spec mini-language:
    interval:start,len | gp:base,len | msub:d | asub:b1;b2 | rand:size,seed
    | garaev:lambda | inv(<spec>) | union(<spec>,<spec>) | image(<ratfn>,<spec>)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BadArgument, BadLambda
from .field import FieldCtx, FieldParams, add_vec, build_field, mul_vec


@dataclass(frozen=True)
class FSubset:
    """Sorted deduplicated subset of the field the params describe."""

    params: FieldParams
    elems: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        e = self.elems
        if e.size and (e[0] < 0 or e[-1] >= self.params.q):
            raise BadArgument("subset element outside [0, q)")

    @classmethod
    def from_array(cls, params: FieldParams, arr) -> "FSubset":
        e = np.unique(np.asarray(arr, dtype=np.int64))
        e.flags.writeable = False
        return cls(params, e)

    @property
    def size(self) -> int:
        return int(self.elems.size)

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(int(x) for x in self.elems)

    def __contains__(self, x):
        i = np.searchsorted(self.elems, x)
        return i < self.elems.size and self.elems[i] == x

    def __repr__(self):
        head = ",".join(str(int(x)) for x in self.elems[:8])
        tail = ",..." if self.size > 8 else ""
        return f"FSubset(q={self.params.q}, size={self.size}, {{{head}{tail}}})"

    def union(self, other: "FSubset") -> "FSubset":
        self._same_field(other)
        return FSubset.from_array(self.params,
                                  np.concatenate([self.elems, other.elems]))

    def minus(self, other: "FSubset") -> "FSubset":
        self._same_field(other)
        return FSubset.from_array(self.params,
                                  np.setdiff1d(self.elems, other.elems))

    def intersect(self, other: "FSubset") -> "FSubset":
        self._same_field(other)
        return FSubset.from_array(self.params,
                                  np.intersect1d(self.elems, other.elems))

    def _same_field(self, other):
        if other.params != self.params:
            raise BadArgument("subsets live in different fields")


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def interval(ctx: FieldCtx, start: int, length: int) -> FSubset:
    """{start, ..., start+length-1} reduced mod p; prime fields only."""
    if ctx.n != 1:
        raise BadArgument("intervals are defined over prime fields only")
    if length < 0:
        raise BadArgument("interval length must be nonnegative")
    if length >= ctx.p:
        return field_set(ctx)
    e = (start + np.arange(length, dtype=np.int64)) % ctx.p
    return FSubset.from_array(ctx.params, e)


def geometric_progression(ctx: FieldCtx, base: int, length: int) -> FSubset:
    """{base^1, ..., base^length}."""
    if length < 0:
        raise BadArgument("length must be nonnegative")
    if length == 0:
        return FSubset.from_array(ctx.params, [])
    if base == 0:
        return FSubset.from_array(ctx.params, [0])
    dl = int(ctx.dlog_table[base])
    ks = (dl * np.arange(1, length + 1, dtype=np.int64)) % (ctx.q - 1)
    return FSubset.from_array(ctx.params, ctx.exp_table[ks])


def mult_subgroup(ctx: FieldCtx, d: int) -> FSubset:
    """The unique multiplicative subgroup of order d, for d | q-1."""
    if d < 1 or (ctx.q - 1) % d != 0:
        raise BadArgument(f"d = {d} does not divide q-1 = {ctx.q - 1}")
    step = (ctx.q - 1) // d
    ks = (np.arange(d, dtype=np.int64) * step) % (ctx.q - 1)
    return FSubset.from_array(ctx.params, ctx.exp_table[ks])


def add_subspace(ctx: FieldCtx, basis) -> FSubset:
    """All GF(p)-linear combinations of the basis elements."""
    basis = [int(b) for b in basis]
    if ctx.p ** len(basis) > (1 << 22):
        raise BadArgument("subspace enumeration too large")
    acc = np.zeros(1, dtype=np.int64)
    for b in basis:
        multiples = np.array(
            [mul_vec(ctx, np.int64(c), np.int64(b)) for c in range(ctx.p)],
            dtype=np.int64)
        acc = add_vec(ctx, acc[:, None], multiples[None, :]).ravel()
    return FSubset.from_array(ctx.params, acc)


def random_subset(ctx: FieldCtx, size: int, seed: int) -> FSubset:
    """Uniform subset without replacement from a seeded PCG64 stream."""
    if not 0 <= size <= ctx.q:
        raise BadArgument(f"size {size} outside [0, {ctx.q}]")
    rng = np.random.Generator(np.random.PCG64(seed))
    return FSubset.from_array(ctx.params, rng.permutation(ctx.q)[:size])


def garaev_set(ctx: FieldCtx, lam: int) -> FSubset:
    """Pigeonhole intersection J0 with f(J), J = {1..lam}, f = 1/X.

    Covers GF(p) by ceil(p/lam) consecutive intervals of length <= lam and
    returns the intersection of f(J) with the fullest one (ties: smallest
    start).  The floor |result| >= lam^2/p - 1 is checked at runtime; the
    pigeonhole argument guarantees it whenever lam^3 <= p^2 + p*lam (roughly
    lam <= p^(2/3)), and larger lam can trip the check, which raises rather
    than return a set violating the documented guarantee.
    """
    if ctx.n != 1:
        raise BadArgument("the construction lives in prime fields")
    p = ctx.p
    if not 1 <= lam < p:
        raise BadLambda(f"lambda = {lam} outside [1, {p})")
    js = np.arange(1, lam + 1, dtype=np.int64)
    fj = ctx.inv_table[js]
    buckets = np.bincount(fj // lam, minlength=math.ceil(p / lam))
    best = int(np.argmax(buckets))  # argmax takes the first max: smallest start
    sel = fj[fj // lam == best]
    out = FSubset.from_array(ctx.params, sel)
    assert out.size >= lam * lam / p - 1, "pigeonhole guarantee violated"
    return out


def inverse_set(ctx: FieldCtx, U: FSubset) -> FSubset:
    """{u^-1 : u in U, u != 0}."""
    nz = U.elems[U.elems != 0]
    return FSubset.from_array(ctx.params, ctx.inv_table[nz])


def field_set(ctx: FieldCtx) -> FSubset:
    return FSubset.from_array(ctx.params, np.arange(ctx.q, dtype=np.int64))


# ---------------------------------------------------------------------------
# mini-language
# ---------------------------------------------------------------------------

def _split_top(s: str, sep: str = ","):
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_set_spec(ctx: FieldCtx, spec: str) -> FSubset:
    """Parse a set-spec string (see module docstring for the grammar)."""
    s = spec.strip()
    if not s:
        raise BadArgument("empty set spec")

    for head in ("inv", "union", "image"):
        if s.startswith(head + "(") and s.endswith(")"):
            inner = s[len(head) + 1:-1]
            if head == "inv":
                return inverse_set(ctx, parse_set_spec(ctx, inner))
            if head == "union":
                # sub-specs themselves contain commas, so search the split
                parts = _split_top(inner)
                if len(parts) < 2:
                    raise BadArgument(f"union needs two specs: {spec!r}")
                for i in range(1, len(parts)):
                    left = ",".join(parts[:i])
                    right = ",".join(parts[i:])
                    try:
                        return parse_set_spec(ctx, left).union(
                            parse_set_spec(ctx, right))
                    except BadArgument:
                        continue
                raise BadArgument(f"cannot split union args: {spec!r}")
            # image(<ratfn>,<spec>): the ratfn may itself contain commas, so
            # try each top-level comma as the split point
            from .ratfunc import apply_to_set, parse_ratfunc

            parts = _split_top(inner)
            for i in range(1, len(parts)):
                fn_text = ",".join(parts[:i])
                spec_text = ",".join(parts[i:])
                try:
                    inner_set = parse_set_spec(ctx, spec_text)
                    fn = parse_ratfunc(ctx, fn_text)
                except BadArgument:
                    continue
                return apply_to_set(ctx, fn, inner_set)
            raise BadArgument(f"cannot split image args: {spec!r}")

    if ":" not in s:
        raise BadArgument(f"unrecognized set spec: {spec!r}")
    head, args = s.split(":", 1)
    try:
        if head == "interval":
            start, length = (int(t) for t in args.split(","))
            return interval(ctx, start, length)
        if head == "gp":
            base, length = (int(t) for t in args.split(","))
            return geometric_progression(ctx, base, length)
        if head == "msub":
            return mult_subgroup(ctx, int(args))
        if head == "asub":
            basis = [int(t) for t in args.split(";") if t.strip() != ""]
            return add_subspace(ctx, basis)
        if head == "rand":
            size, seed = (int(t) for t in args.split(","))
            return random_subset(ctx, size, seed)
        if head == "garaev":
            return garaev_set(ctx, int(args))
    except (ValueError, TypeError) as e:
        raise BadArgument(f"bad arguments in set spec: {spec!r}") from e
    raise BadArgument(f"unrecognized set spec head: {head!r}")


def subset_for_params(params: FieldParams, xs) -> FSubset:
    """Convenience constructor from any iterable of indices."""
    return FSubset.from_array(params, list(xs))


def ctx_of(subset: FSubset) -> FieldCtx:
    """Resolve the (cached) FieldCtx a subset lives in."""
    return build_field(subset.params.p, subset.params.n)
