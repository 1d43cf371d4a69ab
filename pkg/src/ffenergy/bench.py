"""Benchmark the numba kernels against their pure-numpy fallbacks.

Run as ``python -m ffenergy.bench``.  Requires numba; without it only the
numpy column is produced.  Timings use the best of `repeat` runs after a
warmup call (which also absorbs JIT compilation).
"""

from __future__ import annotations

import time

import numpy as np

from . import kernels
from .backend import HAVE_NUMBA
from .characters import AdditiveCharacter, additive_table
from .field import build_field
from .sets import random_subset


def _best_ms(fn, repeat=5):
    fn()  # warmup / compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3


def run(p=4099, set_size=150, repeat=5):
    ctx = build_field(p)
    A = random_subset(ctx, set_size, 1).elems
    B = random_subset(ctx, set_size, 2).elems
    C = random_subset(ctx, set_size, 3).elems
    Cnz = C[C != 0]
    tab = additive_table(ctx, AdditiveCharacter(1))
    ones = np.ones(len(A), dtype=np.complex128)
    onesb = np.ones(len(B), dtype=np.complex128)
    onesc = np.ones(len(Cnz), dtype=np.complex128)
    plumb = (ctx.q, ctx.p, ctx.n, ctx.digits, ctx.pw, ctx.dlog_table,
             ctx.exp_table)

    tf = ctx.trace_table.copy()
    defined = np.ones(ctx.q, dtype=bool)

    cases = {
        "pair_add_counts": (
            lambda: kernels.pair_add_counts_numpy(
                A, B, ctx.q, ctx.p, ctx.n, ctx.digits, ctx.pw),
            lambda: kernels.pair_add_counts_numba(
                A, B, ctx.q, ctx.p, ctx.n, ctx.digits, ctx.pw)
            if HAVE_NUMBA else None),
        "triple_conv_sum": (
            lambda: kernels.triple_conv_sum_numpy(A, B, C, tab, *plumb),
            lambda: kernels.triple_conv_sum_numba(A, B, C, tab, *plumb)
            if HAVE_NUMBA else None),
        "kloosterman_sum": (
            lambda: kernels.kloosterman_numpy(
                A, B, Cnz, ones, onesb, onesc, tab, ctx.q,
                ctx.dlog_table, ctx.exp_table, ctx.inv_table),
            lambda: kernels.kloosterman_numba(
                A, B, Cnz, ones, onesb, onesc, tab, ctx.q,
                ctx.dlog_table, ctx.exp_table, ctx.inv_table)
            if HAVE_NUMBA else None),
        "exceptional_scan": (
            lambda: kernels.exceptional_scan_numpy(
                tf, defined, ctx.trace_table, ctx.q, ctx.dlog_table,
                ctx.exp_table, ctx.p),
            lambda: kernels.exceptional_scan_numba(
                tf, defined, ctx.trace_table, ctx.q, ctx.dlog_table,
                ctx.exp_table, ctx.p)
            if HAVE_NUMBA else None),
    }

    print(f"GF({p}), |A|=|B|=|C|={set_size}, best of {repeat}")
    print(f"{'kernel':20s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, (np_fn, nb_fn) in cases.items():
        t_np = _best_ms(np_fn, repeat)
        if HAVE_NUMBA:
            t_nb = _best_ms(nb_fn, repeat)
            print(f"{name:20s} {t_np:10.3f} {t_nb:10.3f} {t_np / t_nb:7.1f}x")
        else:
            print(f"{name:20s} {t_np:10.3f} {'n/a':>10s} {'':>8s}")


if __name__ == "__main__":
    run()
