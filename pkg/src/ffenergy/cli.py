"""Command-line surface: field/energy/decompose/charsum/verify/experiment.

Exit codes: 0 success, 1 hard-assertion failure in a suite, 2 configuration
error (bad flags, bad config file, unknown suite, malformed specs).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .backend import BACKEND
from .characters import AdditiveCharacter, MultiplicativeCharacter
from .charsums import kloosterman_K, sum_S, sum_T, sum_mixed
from .decompose import partition
from .energy import additive_energy, multiplicative_energy, sumset
from .errors import FFError, ConfigError
from .field import build_field
from .harness import ExperimentConfig, emit_csv, run_experiment, run_suite
from .ratfunc import format_ratfunc, parse_ratfunc
from .sets import parse_set_spec


def _add_field_args(sub):
    sub.add_argument("--p", type=int, required=True, help="characteristic")
    sub.add_argument("--n", type=int, default=1, help="extension degree")


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="ffenergy",
        description="finite-field energies, decompositions, and character "
                    f"sums over ab+ac+bc (kernel backend: {BACKEND})")
    sp = ap.add_subparsers(dest="command", required=True)

    p_field = sp.add_parser("field", help="build a field and print its tables'"
                                          " shape")
    _add_field_args(p_field)

    p_energy = sp.add_parser("energy", help="energies of a set")
    _add_field_args(p_energy)
    p_energy.add_argument("--set", required=True, dest="set_spec",
                          help="set spec, e.g. interval:0,10 or rand:30,7")

    p_dec = sp.add_parser("decompose", help="low-energy partition of a set")
    _add_field_args(p_dec)
    p_dec.add_argument("--set", required=True, dest="set_spec")
    p_dec.add_argument("--fn", default="1/0,1",
                       help="rational function, coefficient lists num/den")
    p_dec.add_argument("--threshold", type=float, default=None,
                       help="override the A^3/M(A) stopping threshold")

    p_cs = sp.add_parser("charsum", help="triple character sums and bounds")
    _add_field_args(p_cs)
    p_cs.add_argument("--kind", choices=("S", "T", "mixed", "K"), required=True)
    p_cs.add_argument("--sets", nargs=3, required=True,
                      metavar=("A", "B", "C"))
    p_cs.add_argument("--chi", type=int, default=1,
                      help="multiplicative character index j")
    p_cs.add_argument("--psi", type=int, default=1,
                      help="additive character parameter a")

    p_verify = sp.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", required=True,
                          help="suite name, or 'all'")
    p_verify.add_argument("--seed", type=int, default=20260808)
    p_verify.add_argument("--trials", type=int, default=20)
    p_verify.add_argument("--out", default=None, help="CSV output path")
    p_verify.add_argument("--timing", action="store_true",
                          help="write measured runtimes into the CSV "
                               "(breaks byte-identical reruns)")

    p_exp = sp.add_parser("experiment", help="run suites from a JSON config")
    p_exp.add_argument("--config", required=True)
    return ap


def _print_records(records):
    failed = 0
    for r in sorted(records, key=lambda x: (x.suite, x.instance)):
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.suite} :: {r.instance} :: "
              f"lhs={r.lhs:.6g} rhs={r.rhs:.6g} ratio={r.ratio:.4g}")
        failed += not r.passed
    print(f"-- {len(records)} records, {failed} failed")
    return failed


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0

    try:
        if args.command == "field":
            ctx = build_field(args.p, args.n)
            print(ctx)
            print(f"q = {ctx.q}, generator = {ctx.generator}, "
                  f"tables: exp[{len(ctx.exp_table)}] trace[{ctx.q}]")
            return 0

        if args.command == "energy":
            ctx = build_field(args.p, args.n)
            U = parse_set_spec(ctx, args.set_spec)
            e = additive_energy(U)
            em = multiplicative_energy(U)
            ss = sumset(U, U)
            print(f"set {args.set_spec}: size={U.size}")
            print(f"E(U)   = {e.value}")
            print(f"E^x(U) = {em.value}")
            print(f"|U+U|  = {ss.size}  (E >= size^4/|U+U| = "
                  f"{U.size ** 4 / ss.size if ss.size else 0:.4g})")
            return 0

        if args.command == "decompose":
            ctx = build_field(args.p, args.n)
            U = parse_set_spec(ctx, args.set_spec)
            f = parse_ratfunc(ctx, args.fn)
            res = partition(ctx, U, f, threshold=args.threshold)
            print(f"A: size={U.size}, f = {format_ratfunc(f)}")
            print(f"threshold = {res.threshold:.6g} (M = "
                  f"{res.m_value if res.m_value is not None else 'undefined'})"
                  f"{'  [trivial regime]' if res.trivial_flag else ''}")
            print(f"S: size={res.S_final.size}, E(S) = {res.e_s_final}")
            print(f"T: size={res.T_final.size}, E(f(T)) = {res.e_f_t}, "
                  f"pieces = {len(res.pieces)}, "
                  f"aggregate bound = {res.aggregate_bound:.6g}")
            for i, it in enumerate(res.iterations):
                print(f"  step {i}: |V|={it.v_size} E(V)={it.e_v} "
                      f"|Q|={it.q_size} E(f(Q))={it.e_f_piece} [{it.kind}]")
            if res.c1 is not None:
                print(f"observed constants: c1 = {res.c1:.6g}, "
                      f"c2 = {res.c2:.6g}")
            return 0

        if args.command == "charsum":
            ctx = build_field(args.p, args.n)
            A, B, C = (parse_set_spec(ctx, s) for s in args.sets)
            psi = AdditiveCharacter(args.psi)
            chi = MultiplicativeCharacter(args.chi)
            if args.kind == "S":
                r = sum_S(ctx, A, B, C, psi)
            elif args.kind == "T":
                r = sum_T(ctx, A, B, C, chi)
            elif args.kind == "mixed":
                r = sum_mixed(ctx, A, B, C, chi, psi)
            else:
                r = kloosterman_K(ctx, A, B, C, psi=psi)
            print(f"{args.kind}: value = {r.value:.6f}, |.| = {r.magnitude:.6f}, "
                  f"terms = {r.terms}")
            for name, bound, ratio in r.bound_report:
                print(f"  bound {name}: {bound:.6g}  ratio = {ratio:.4g}")
            return 0

        if args.command == "verify":
            cfg = ExperimentConfig(suite=args.suite, seed=args.seed,
                                   trials=args.trials)
            records = run_suite(args.suite, cfg)
            failed = _print_records(records)
            if args.out:
                emit_csv(records, args.out, timing=args.timing)
                print(f"wrote {args.out}")
            return 1 if failed else 0

        if args.command == "experiment":
            cfg = ExperimentConfig.from_json(args.config)
            records, failed = run_experiment(cfg)
            _print_records(records)
            if cfg.output:
                print(f"wrote {cfg.output}")
            return 1 if failed else 0

        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except FFError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
