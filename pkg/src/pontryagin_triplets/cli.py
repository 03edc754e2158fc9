"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when some check fails, 2 for
input errors (unreadable or invalid files, bad arguments, points outside
the admissible region).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .boundary import construct_triplet, exceptional_sets
from .colligations import (compress, exit_extension, generalized_resolvent,
                           lift_triplet, random_simple_colligation)
from .config import tolerance
from .exceptions import TripletError
from .io import dump_instance, encode_matrix, fixture_names, fixture_path, parse_instance
from .resolvents import PointClass, direct_resolvent, krein_resolvent, point_class
from .sampling import random_instance
from .suite import SUITES, run_suite
from .weyl import gamma, rel_residual, weyl

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def parse_complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InputError(f"not a complex number: {text!r}") from None


def _resolve(path):
    p = Path(path)
    if p.exists():
        return p
    if path in fixture_names() or path.removesuffix(".json") in fixture_names():
        return fixture_path(path)
    raise InputError(f"no such file or fixture: {path}")


def _load(path, kappa1=0):
    f = parse_instance(_resolve(path))
    return f, f.get_triplet(kappa1)


def _emit(args, payload, text):
    if args.format == "json":
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print(text)


def _fmt_matrix(A):
    return np.array2string(np.asarray(A), precision=10, suppress_small=True)


# -- verbs ------------------------------------------------------------------
def cmd_verify(args):
    report = run_suite(_resolve(args.path), args.suite or "core", args.seed, args.tol, args.kappa1)
    print(report.to_json(args.timing) if args.format == "json" else report.to_text(args.timing))
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_report(args):
    target = Path(args.path) if Path(args.path).is_dir() else _resolve(args.path)
    report = run_suite(target, args.suite or "all", args.seed, args.tol, args.kappa1)
    if args.format == "json":
        print(report.to_json(args.timing))
    elif args.summary:
        s = report.summary()
        print(f"{s['verdict'].upper()}: {s['passed']}/{s['checks']} checks on "
              f"{s['instances']} instance(s); failing: {', '.join(s['failed_instances']) or 'none'}")
    else:
        print(report.to_text(args.timing))
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_weyl(args):
    f, t = _load(args.path, args.kappa1)
    lam = parse_complex(args.at)
    j = 1 if abs(lam) > 1 else 2
    M, g = weyl(t, j, lam), gamma(t, j, lam)
    payload = {"lambda": [lam.real, lam.imag], "j": j, "M": encode_matrix(M), "gamma": encode_matrix(g)}
    _emit(args, payload, f"M{j}({lam}) =\n{_fmt_matrix(M)}\ngamma{j}({lam}) =\n{_fmt_matrix(g)}")
    return EXIT_PASS


def cmd_resolvent(args):
    f, t = _load(args.path, args.kappa1)
    lam = parse_complex(args.at)
    if not f.taus:
        raise InputError("the instance file lists no tau")
    try:
        tau = f.tau(args.tau) if args.tau else f.taus[0][1]
    except KeyError:
        raise InputError(f"no tau labelled {args.tau!r}") from None
    cls = point_class(t, tau, lam)
    if cls != PointClass.REGULAR:
        payload = {"lambda": [lam.real, lam.imag], "class": cls.value, "resolvent": None}
        _emit(args, payload, f"point class: {cls.value}; no resolvent at {lam}")
        return EXIT_PASS
    R = krein_resolvent(t, tau, lam, args.form)
    res = rel_residual(R, direct_resolvent(t, tau, lam))
    payload = {"lambda": [lam.real, lam.imag], "class": cls.value,
               "resolvent": encode_matrix(R), "residual": res}
    _emit(args, payload, f"point class: {cls.value}\nR({lam}) =\n{_fmt_matrix(R)}\n"
                         f"residual against direct inversion: {res:.3e}")
    return EXIT_PASS if res <= 1e-8 else EXIT_FAIL


def cmd_gres(args):
    f, t = _load(args.path, args.kappa1)
    lam = parse_complex(args.at)
    D = f.colligation or random_simple_colligation(1, 0, t.N2.dim, t.N1.dim, args.seed,
                                                   input_space=t.N2, output_space=t.N1)
    lifted = lift_triplet(t, D.state)
    R = generalized_resolvent(t, D, lam, ex=exceptional_sets(t))
    C = compress(exit_extension(lifted, D), lam, lifted.exit)
    res = rel_residual(R, C)
    payload = {"lambda": [lam.real, lam.imag], "gres": encode_matrix(R), "residual": res}
    _emit(args, payload, f"generalized resolvent at {lam} =\n{_fmt_matrix(R)}\n"
                         f"residual against compression: {res:.3e}")
    return EXIT_PASS if res <= 1e-8 else EXIT_FAIL


def cmd_random_instance(args):
    inst = random_instance(args.dim, args.kappa, args.dom_dim, args.degenerate, args.seed)
    triplet = None
    if args.with_triplet:
        triplet = construct_triplet(inst, args.kappa1)
    out = args.output
    if out:
        dump_instance(out, inst, triplet=triplet, seed=args.seed)
    else:
        from .io import instance_to_dict
        print(json.dumps(instance_to_dict(inst, triplet=triplet, seed=args.seed), indent=1))
    return EXIT_PASS


# -- parser -----------------------------------------------------------------
def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--kappa1", type=int, default=0,
                        help="negative index of the boundary spaces when constructing a triplet")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    common.set_defaults(format="text")

    p = argparse.ArgumentParser(prog="pontryagin-triplets",
                                description="Boundary triplets of isometries in Pontryagin spaces.")
    sub = p.add_subparsers(dest="verb", required=True)

    def suite_opts(sp):
        sp.add_argument("path", help="instance file, fixture name or directory")
        sp.add_argument("--suite", choices=SUITES, default=None)
        sp.add_argument("--timing", action="store_true", help="include per-check timings")

    sp = sub.add_parser("verify", parents=[common], help="run a check suite (default: core)")
    suite_opts(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("report", parents=[common], help="run a check suite (default: all)")
    suite_opts(sp)
    sp.add_argument("--summary", action="store_true", help="print only the aggregate line")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("weyl", parents=[common], help="Weyl function and gamma-field at a point")
    sp.add_argument("path")
    sp.add_argument("--at", required=True)
    sp.set_defaults(func=cmd_weyl)

    sp = sub.add_parser("resolvent", parents=[common], help="resolvent of an extension")
    sp.add_argument("path")
    sp.add_argument("--at", required=True)
    sp.add_argument("--tau", default=None, help="label of the parameter in the file")
    sp.add_argument("--form", choices=("relation", "pair", "unitary"), default="relation")
    sp.set_defaults(func=cmd_resolvent)

    sp = sub.add_parser("gres", parents=[common], help="generalized resolvent from a colligation")
    sp.add_argument("path")
    sp.add_argument("--at", required=True)
    sp.set_defaults(func=cmd_gres)

    sp = sub.add_parser("random-instance", parents=[common], help="write a seeded random instance")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--kappa", type=int, default=0)
    sp.add_argument("--dom-dim", type=int, required=True)
    sp.add_argument("--degenerate", action="store_true")
    sp.add_argument("--with-triplet", action="store_true")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_random_instance)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        with tolerance(args.tol):
            return args.func(args)
    except (InputError, TripletError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        errors = getattr(exc, "errors", None)
        for e in errors or ():
            print(f"  - {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
