"""Exact arithmetic for GF(p) and GF(p^n) with fully tabulated structure.

Elements are bare indices in [0, q): the base-p digits of an index are the
coefficients (low degree first) of the residue polynomial.  A FieldCtx holds
the precomputed exp/dlog/trace/inverse tables plus the digit matrix that makes
vectorized addition possible; every operation takes the context explicitly.
Mixing indices across contexts is a caller error the plain-int representation
cannot detect.

The q <= 2**20 cap keeps every table at O(q) memory (tens of MB at the cap).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import BadArgument, DivisionByZero, FieldTooLarge, NonPrime

MAX_Q = 1 << 20

# A field element is its index; no wrapper type.
FieldElement = int


@dataclass(frozen=True)
class FieldParams:
    """Defining data of GF(p^n): characteristic, degree, size, modulus.

    modulus is the monic irreducible polynomial as a low-degree-first
    coefficient tuple of length n+1, and is None when n == 1.
    """

    p: int
    n: int
    q: int
    modulus: tuple[int, ...] | None


class FieldCtx:
    """Immutable tabulated field; safe to share across threads.

    Attributes:
        params: FieldParams
        generator: smallest-index element of multiplicative order q-1
        exp_table: int64[q-1], exp_table[k] = generator**k
        dlog_table: int64[q], inverse of exp_table on nonzero indices, -1 at 0
        trace_table: int64[q], Tr(x) as a value in [0, p)
        inv_table: int64[q], multiplicative inverses, -1 at 0
        neg_table: int64[q], additive inverses
        digits: int64[q, n], base-p digit expansion of every index
        pw: int64[n], powers of p used to recompose digits
    """

    __slots__ = (
        "params",
        "p",
        "n",
        "q",
        "generator",
        "exp_table",
        "dlog_table",
        "trace_table",
        "inv_table",
        "neg_table",
        "digits",
        "pw",
    )

    def __init__(self, params, generator, exp_table, dlog_table, trace_table,
                 inv_table, neg_table, digits, pw):
        self.params = params
        self.p = params.p
        self.n = params.n
        self.q = params.q
        self.generator = generator
        for name, arr in (("exp_table", exp_table), ("dlog_table", dlog_table),
                          ("trace_table", trace_table), ("inv_table", inv_table),
                          ("neg_table", neg_table), ("digits", digits), ("pw", pw)):
            arr.flags.writeable = False
            setattr(self, name, arr)

    def __repr__(self):
        if self.n == 1:
            return f"FieldCtx(GF({self.p}), generator={self.generator})"
        return (f"FieldCtx(GF({self.p}^{self.n}), modulus={self.params.modulus}, "
                f"generator={self.generator})")


def is_prime(m: int) -> bool:
    """Trial-division primality check, sufficient below the table cap."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# prime-field polynomial helpers used only for the modulus search
# ---------------------------------------------------------------------------

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymod_p(a, b, p):
    """Remainder of a mod b over GF(p); b monic, coefficient lists low-first."""
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - db
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - lead * bc) % p
        _trim(a)
        if not a:
            break
    return a


def _is_irreducible(coeffs, p):
    """Exhaustive trial division by every monic polynomial of degree <= n//2."""
    n = len(coeffs) - 1
    if coeffs[0] == 0:
        return n == 1  # divisible by X unless the poly is X itself
    for d in range(1, n // 2 + 1):
        for tail in product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not _polymod_p(coeffs, divisor, p):
                return False
    return True


def _min_irreducible(p, n):
    """Lexicographically smallest monic irreducible of degree n over GF(p).

    Coefficient tuples (c0, ..., c_{n-1}) are compared low-degree-first.
    """
    for low in product(range(p), repeat=n):
        coeffs = list(low) + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found; unreachable")


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _mul_raw(a_dig, b_dig, p, n, mod_low):
    """Product of two digit tuples modulo the field modulus (scalar path)."""
    conv = [0] * (2 * n - 1)
    for i, ai in enumerate(a_dig):
        if ai:
            for j, bj in enumerate(b_dig):
                conv[i + j] = (conv[i + j] + ai * bj) % p
    # reduce X^k for k >= n using X^n = -mod_low
    for k in range(2 * n - 2, n - 1, -1):
        ck = conv[k]
        if ck:
            conv[k] = 0
            for i, mi in enumerate(mod_low):
                conv[k - n + i] = (conv[k - n + i] - ck * mi) % p
    return tuple(conv[:n])


def _pow_raw(a_dig, e, p, n, mod_low):
    result = tuple([1] + [0] * (n - 1))
    base = a_dig
    while e:
        if e & 1:
            result = _mul_raw(result, base, p, n, mod_low)
        base = _mul_raw(base, base, p, n, mod_low)
        e >>= 1
    return result


def _factor(m):
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _find_generator(p, n, q, mod_low, digits, pw):
    """Smallest index of multiplicative order q-1."""
    if q == 2:
        return 1
    one = tuple([1] + [0] * (n - 1))
    prime_factors = _factor(q - 1)
    cofactors = [(q - 1) // r for r in prime_factors]
    for g in range(1, q):
        g_dig = tuple(digits[g])
        if all(_pow_raw(g_dig, e, p, n, mod_low) != one for e in cofactors):
            return g
    raise AssertionError("no generator found; unreachable")


def _mul_by_g_perm(g, p, n, q, mod_low, digits, pw):
    """Permutation i -> g*i on indices, built vectorized (mul by g is linear)."""
    cols = np.empty((n, n), dtype=np.int64)
    g_dig = tuple(int(v) for v in digits[g])
    basis = np.eye(n, dtype=np.int64)
    for i in range(n):
        cols[:, i] = _mul_raw(tuple(basis[i]), g_dig, p, n, mod_low)
    prod = (digits @ cols.T) % p
    return prod @ pw


@lru_cache(maxsize=None)
def _build_field_cached(p: int, n: int) -> FieldCtx:
    q = p ** n
    if n == 1:
        modulus = None
        mod_low = None
    else:
        modulus = _min_irreducible(p, n)
        mod_low = modulus[:n]

    pw = p ** np.arange(n, dtype=np.int64)
    idx = np.arange(q, dtype=np.int64)
    digits = (idx[:, None] // pw[None, :]) % p

    if n == 1:
        # native mod-p arithmetic; digit machinery still holds (pw = [1])
        gen = None
        factors = _factor(q - 1) if q > 2 else []
        for g in range(1, q):
            if q == 2 or all(pow(g, (q - 1) // r, p) != 1 for r in factors):
                gen = g
                break
        perm = (np.arange(q, dtype=np.int64) * gen) % p
    else:
        gen = _find_generator(p, n, q, mod_low, digits, pw)
        perm = _mul_by_g_perm(gen, p, n, q, mod_low, digits, pw)

    exp_table = np.empty(q - 1, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        exp_table[k] = x
        x = int(perm[x])
    if x != 1:
        raise AssertionError("generator walk did not close; unreachable")

    dlog_table = np.full(q, -1, dtype=np.int64)
    dlog_table[exp_table] = np.arange(q - 1, dtype=np.int64)
    if np.any(dlog_table[1:] < 0):
        raise AssertionError("generator does not reach all nonzero elements")

    inv_table = np.full(q, -1, dtype=np.int64)
    inv_table[exp_table] = exp_table[(-np.arange(q - 1)) % (q - 1)]

    neg_table = ((-digits) % p) @ pw

    # trace: x + x^p + ... + x^{p^{n-1}}, accumulated through Frobenius orbits
    frob = np.zeros(q, dtype=np.int64)
    frob[exp_table] = exp_table[(np.arange(q - 1) * p) % (q - 1)]
    tr = idx.copy()
    y = idx.copy()
    for _ in range(n - 1):
        y = frob[y]
        tr = ((digits[tr] + digits[y]) % p) @ pw
    if np.any(tr >= p):
        raise AssertionError("trace left the prime subfield; unreachable")

    params = FieldParams(p=p, n=n, q=q, modulus=modulus)
    return FieldCtx(params, gen, exp_table, dlog_table, tr.astype(np.int64),
                    inv_table, neg_table, digits, pw)


def build_field(p: int, n: int = 1) -> FieldCtx:
    """Construct GF(p^n) with the canonical modulus and generator.

    The modulus is the lexicographically smallest monic irreducible of degree
    n over GF(p) (low-degree-first comparison); the generator is the smallest
    index of multiplicative order q-1.  Contexts are cached, so repeated calls
    return the same immutable instance.

    Raises:
        NonPrime: p fails trial division.
        FieldTooLarge: p**n exceeds 2**20.
        BadArgument: n < 1.
    """
    if not is_prime(p):
        raise NonPrime(f"p = {p} is not prime")
    if n < 1:
        raise BadArgument(f"extension degree must be >= 1, got {n}")
    if p ** n > MAX_Q:
        raise FieldTooLarge(f"q = {p}^{n} exceeds the 2^20 table cap")
    return _build_field_cached(p, n)


# ---------------------------------------------------------------------------
# scalar operations
# ---------------------------------------------------------------------------

def _check_elem(ctx, a):
    if not 0 <= a < ctx.q:
        raise BadArgument(f"index {a} outside [0, {ctx.q})")


def add(ctx: FieldCtx, a: int, b: int) -> int:
    _check_elem(ctx, a)
    _check_elem(ctx, b)
    if ctx.n == 1:
        return (a + b) % ctx.p
    return int(((ctx.digits[a] + ctx.digits[b]) % ctx.p) @ ctx.pw)


def neg(ctx: FieldCtx, a: int) -> int:
    _check_elem(ctx, a)
    return int(ctx.neg_table[a])


def sub(ctx: FieldCtx, a: int, b: int) -> int:
    return add(ctx, a, neg(ctx, b))


def mul(ctx: FieldCtx, a: int, b: int) -> int:
    """Product in GF(q) via the exp/dlog tables (polynomial mult mod modulus
    is used once at construction time to build them)."""
    _check_elem(ctx, a)
    _check_elem(ctx, b)
    if a == 0 or b == 0:
        return 0
    k = (ctx.dlog_table[a] + ctx.dlog_table[b]) % (ctx.q - 1)
    return int(ctx.exp_table[k])


def inv(ctx: FieldCtx, a: int) -> int:
    """Multiplicative inverse: generator**((q-1-dlog(a)) mod (q-1))."""
    _check_elem(ctx, a)
    if a == 0:
        raise DivisionByZero("inverse of zero")
    return int(ctx.inv_table[a])


def dlog(ctx: FieldCtx, a: int) -> int:
    """Discrete log base the canonical generator, in [0, q-1)."""
    _check_elem(ctx, a)
    if a == 0:
        raise DivisionByZero("discrete log of zero")
    return int(ctx.dlog_table[a])


def trace(ctx: FieldCtx, a: int) -> int:
    """Tr(a) = a + a^p + ... + a^{p^{n-1}} as a value in [0, p)."""
    _check_elem(ctx, a)
    return int(ctx.trace_table[a])


def pow_elem(ctx: FieldCtx, a: int, e: int) -> int:
    """a**e for integer e (negative allowed when a != 0)."""
    _check_elem(ctx, a)
    if a == 0:
        if e < 0:
            raise DivisionByZero("negative power of zero")
        return 1 if e == 0 else 0
    k = (ctx.dlog_table[a] * e) % (ctx.q - 1)
    return int(ctx.exp_table[k])


# ---------------------------------------------------------------------------
# vectorized operations (no argument validation; hot paths)
# ---------------------------------------------------------------------------

def add_vec(ctx: FieldCtx, a, b):
    if ctx.n == 1:
        return (a + b) % ctx.p
    return ((ctx.digits[a] + ctx.digits[b]) % ctx.p) @ ctx.pw


def sub_vec(ctx: FieldCtx, a, b):
    return add_vec(ctx, a, ctx.neg_table[b])


def neg_vec(ctx: FieldCtx, a):
    return ctx.neg_table[a]


def mul_vec(ctx: FieldCtx, a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = ctx.exp_table[(ctx.dlog_table[a] + ctx.dlog_table[b]) % (ctx.q - 1)]
    return np.where((a == 0) | (b == 0), 0, out)


def inv_vec(ctx: FieldCtx, a):
    a = np.asarray(a, dtype=np.int64)
    if np.any(a == 0):
        raise DivisionByZero("inverse of zero in vector input")
    return ctx.inv_table[a]


def pow_vec(ctx: FieldCtx, a, e: int):
    a = np.asarray(a, dtype=np.int64)
    out = ctx.exp_table[(ctx.dlog_table[a] * e) % (ctx.q - 1)]
    zero_val = 1 if e == 0 else 0
    return np.where(a == 0, zero_val, out)


def elements(ctx: FieldCtx):
    """All field elements, as the index range [0, q)."""
    return np.arange(ctx.q, dtype=np.int64)
