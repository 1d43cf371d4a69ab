"""Hot inner-loop kernels, in numba and pure-numpy variants.

Every kernel exists twice: ``*_numba`` (explicit loops under @njit) and
``*_numpy`` (vectorized).  The module-level unsuffixed name is bound to the
variant selected by :mod:`ffenergy.backend`.  All kernels take plain arrays
plus the field plumbing (p, n, digits, pw, dlog, exp) so they stay independent
of the FieldCtx object layout.

Index conventions match :mod:`ffenergy.field`: element = index in [0, q),
addition is digitwise mod p, multiplication goes through dlog/exp tables.
"""

from __future__ import annotations

import numpy as np

from .backend import HAVE_NUMBA, USE_NUMBA

if HAVE_NUMBA:
    from numba import njit

# chunk cap for numpy paths that materialize |u| x |v| intermediates
_CHUNK = 1 << 22


def _add_outer_np(u, v, p, n, digits, pw):
    """Index sums u[i] + v[j] as an (|u|, |v|) array."""
    if n == 1:
        return (u[:, None] + v[None, :]) % p
    du = digits[u]
    dv = digits[v]
    return ((du[:, None, :] + dv[None, :, :]) % p) @ pw


def _mul_outer_np(u, v, q1, dlog_t, exp_t):
    out = exp_t[(dlog_t[u][:, None] + dlog_t[v][None, :]) % q1]
    return np.where((u[:, None] == 0) | (v[None, :] == 0), 0, out)


# ---------------------------------------------------------------------------
# pair counts: counts[x] = #{(i, j) : u[i] (op) v[j] = x}
# ---------------------------------------------------------------------------

def pair_add_counts_numpy(u, v, q, p, n, digits, pw):
    counts = np.zeros(q, dtype=np.int64)
    if len(u) == 0 or len(v) == 0:
        return counts
    rows = max(1, _CHUNK // max(1, len(v)))
    for lo in range(0, len(u), rows):
        s = _add_outer_np(u[lo:lo + rows], v, p, n, digits, pw)
        counts += np.bincount(s.ravel(), minlength=q)
    return counts


def pair_mul_counts_numpy(u, v, q, dlog_t, exp_t):
    counts = np.zeros(q, dtype=np.int64)
    if len(u) == 0 or len(v) == 0:
        return counts
    rows = max(1, _CHUNK // max(1, len(v)))
    for lo in range(0, len(u), rows):
        m = _mul_outer_np(u[lo:lo + rows], v, q - 1, dlog_t, exp_t)
        counts += np.bincount(m.ravel(), minlength=q)
    return counts


if HAVE_NUMBA:

    @njit(cache=True)
    def _add_idx(a, b, p, n, digits, pw):
        if n == 1:
            return (a + b) % p
        s = 0
        for i in range(n):
            s += ((digits[a, i] + digits[b, i]) % p) * pw[i]
        return s

    @njit(cache=True)
    def _mul_idx(a, b, q1, dlog_t, exp_t):
        if a == 0 or b == 0:
            return 0
        return exp_t[(dlog_t[a] + dlog_t[b]) % q1]

    @njit(cache=True)
    def pair_add_counts_numba(u, v, q, p, n, digits, pw):
        counts = np.zeros(q, dtype=np.int64)
        for i in range(u.shape[0]):
            for j in range(v.shape[0]):
                counts[_add_idx(u[i], v[j], p, n, digits, pw)] += 1
        return counts

    @njit(cache=True)
    def pair_mul_counts_numba(u, v, q, dlog_t, exp_t):
        counts = np.zeros(q, dtype=np.int64)
        q1 = q - 1
        for i in range(u.shape[0]):
            for j in range(v.shape[0]):
                counts[_mul_idx(u[i], v[j], q1, dlog_t, exp_t)] += 1
        return counts


# ---------------------------------------------------------------------------
# triple convolution sum: sum over (a,b,c) of table[a*b + a*c + b*c]
# ---------------------------------------------------------------------------

def triple_conv_sum_numpy(a, b, c, table, q, p, n, digits, pw, dlog_t, exp_t):
    if len(a) == 0 or len(b) == 0 or len(c) == 0:
        return 0j
    s_bc = _add_outer_np(b, c, p, n, digits, pw)
    p_bc = _mul_outer_np(b, c, q - 1, dlog_t, exp_t)
    total = 0j
    for av in a:
        prod = np.where(s_bc == 0, 0,
                        exp_t[(dlog_t[av] + dlog_t[s_bc]) % (q - 1)]) if av != 0 \
            else np.zeros_like(s_bc)
        idx = _add_outer_flat(prod, p_bc, p, n, digits, pw)
        total += table[idx].sum()
    return total


def _add_outer_flat(x, y, p, n, digits, pw):
    """Elementwise index sum of same-shape arrays."""
    if n == 1:
        return (x + y) % p
    return ((digits[x] + digits[y]) % p) @ pw


def conv_image_mask_numpy(a, b, c, q, p, n, digits, pw, dlog_t, exp_t):
    mask = np.zeros(q, dtype=np.bool_)
    if len(a) == 0 or len(b) == 0 or len(c) == 0:
        return mask
    s_bc = _add_outer_np(b, c, p, n, digits, pw)
    p_bc = _mul_outer_np(b, c, q - 1, dlog_t, exp_t)
    for av in a:
        prod = np.where(s_bc == 0, 0,
                        exp_t[(dlog_t[av] + dlog_t[s_bc]) % (q - 1)]) if av != 0 \
            else np.zeros_like(s_bc)
        idx = _add_outer_flat(prod, p_bc, p, n, digits, pw)
        mask[idx.ravel()] = True
    return mask


if HAVE_NUMBA:

    @njit(cache=True)
    def triple_conv_sum_numba(a, b, c, table, q, p, n, digits, pw, dlog_t, exp_t):
        # ab+ac+bc = a*(b+c) + bc: hoist u = b+c, v = bc out of the a-loop
        q1 = q - 1
        total = 0j
        for j in range(b.shape[0]):
            for k in range(c.shape[0]):
                u = _add_idx(b[j], c[k], p, n, digits, pw)
                v = _mul_idx(b[j], c[k], q1, dlog_t, exp_t)
                for i in range(a.shape[0]):
                    au = _mul_idx(a[i], u, q1, dlog_t, exp_t)
                    total += table[_add_idx(au, v, p, n, digits, pw)]
        return total

    @njit(cache=True)
    def conv_image_mask_numba(a, b, c, q, p, n, digits, pw, dlog_t, exp_t):
        q1 = q - 1
        mask = np.zeros(q, dtype=np.bool_)
        for j in range(b.shape[0]):
            for k in range(c.shape[0]):
                u = _add_idx(b[j], c[k], p, n, digits, pw)
                v = _mul_idx(b[j], c[k], q1, dlog_t, exp_t)
                for i in range(a.shape[0]):
                    au = _mul_idx(a[i], u, q1, dlog_t, exp_t)
                    mask[_add_idx(au, v, p, n, digits, pw)] = True
        return mask


# ---------------------------------------------------------------------------
# Kloosterman bilinear form: sum_{a,b} alpha_a beta_b |sum_c gamma_c psi(ac + b/c)|^2
# ---------------------------------------------------------------------------

def kloosterman_numpy(a, b, c, alpha, beta, gamma, psi_table, q, dlog_t, exp_t,
                      inv_t):
    if len(c) == 0 or len(a) == 0 or len(b) == 0:
        return 0j
    cinv = inv_t[c]
    P = psi_table[_mul_outer_np(a, c, q - 1, dlog_t, exp_t)]          # (A, C)
    Q = psi_table[_mul_outer_np(b, cinv, q - 1, dlog_t, exp_t)]       # (B, C)
    M = (P * gamma[None, :]) @ Q.T                                    # (A, B)
    inner = M.real ** 2 + M.imag ** 2
    return complex(alpha @ inner @ beta)


if HAVE_NUMBA:

    @njit(cache=True)
    def kloosterman_numba(a, b, c, alpha, beta, gamma, psi_table, q, dlog_t,
                          exp_t, inv_t):
        q1 = q - 1
        total = 0j
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                inner = 0j
                for k in range(c.shape[0]):
                    ac = _mul_idx(a[i], c[k], q1, dlog_t, exp_t)
                    bci = _mul_idx(b[j], inv_t[c[k]], q1, dlog_t, exp_t)
                    # psi(ac + b c^{-1}) = psi(ac) * psi(b c^{-1})
                    inner += gamma[k] * psi_table[ac] * psi_table[bci]
                total += alpha[i] * beta[j] * (inner.real ** 2 + inner.imag ** 2)
        return total


# ---------------------------------------------------------------------------
# Artin-Schreier scan: first lambda with Tr(f(x) - lambda*x) constant, or -1
# ---------------------------------------------------------------------------

def exceptional_scan_numpy(tf, defined, trace_t, q, dlog_t, exp_t, p_char):
    xs = np.nonzero(defined)[0]
    if len(xs) == 0:
        return -1
    tfx = tf[xs]
    for lam in range(q):
        lx = np.where(xs == 0, 0,
                      exp_t[(dlog_t[lam] + dlog_t[xs]) % (q - 1)]) if lam != 0 \
            else np.zeros_like(xs)
        d = (tfx - trace_t[lx]) % p_char
        if np.all(d == d[0]):
            return lam
    return -1


if HAVE_NUMBA:

    @njit(cache=True)
    def exceptional_scan_numba(tf, defined, trace_t, q, dlog_t, exp_t, p_char):
        q1 = q - 1
        for lam in range(q):
            first = -1
            ok = True
            for x in range(q):
                if not defined[x]:
                    continue
                if lam == 0 or x == 0:
                    lx = 0
                else:
                    lx = exp_t[(dlog_t[lam] + dlog_t[x]) % q1]
                d = (tf[x] - trace_t[lx]) % p_char
                if first < 0:
                    first = d
                elif d != first:
                    ok = False
                    break
            if ok and first >= 0:
                return lam
        return -1


# ---------------------------------------------------------------------------
# backend binding
# ---------------------------------------------------------------------------

if USE_NUMBA:
    pair_add_counts = pair_add_counts_numba
    pair_mul_counts = pair_mul_counts_numba
    triple_conv_sum = triple_conv_sum_numba
    conv_image_mask = conv_image_mask_numba
    kloosterman_sum = kloosterman_numba
    exceptional_scan = exceptional_scan_numba
else:
    pair_add_counts = pair_add_counts_numpy
    pair_mul_counts = pair_mul_counts_numpy
    triple_conv_sum = triple_conv_sum_numpy
    conv_image_mask = conv_image_mask_numpy
    kloosterman_sum = kloosterman_numpy
    exceptional_scan = exceptional_scan_numpy
