"""Command-line entry point.

Exit codes: 0 ok, 1 verification failure or non-modular input, 2 usage or
malformed input, 3 computation error (window, budget, division by zero).
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .. import enumgeo, lattice, numeric, ringstruct
from ..errors import ComputationError, NotModular, QModularError
from .evaluate import SeriesDocument, evaluate
from .parser import ParseError, parse
from .verify import DEFAULT_ORDER, SUITES, run_suites

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


def _ints(text: str, n: int, name: str):
    parts = text.split(",")
    if len(parts) != n:
        raise argparse.ArgumentTypeError(f"{name} needs {n} comma-separated values")
    return parts


def _gamma(text: str) -> numeric.MoebiusElement:
    try:
        a, b, c, d = (int(x) for x in _ints(text, 4, "--gamma"))
        return numeric.MoebiusElement(a, b, c, d)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tau(text: str) -> complex:
    try:
        x, y = (float(v) for v in _ints(text, 2, "--tau"))
        return numeric.HalfPlanePoint(complex(x, y)).tau
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _lattice(text: str) -> lattice.Lattice:
    kind, _, arg = text.partition(":")
    if kind == "e8" and not arg:
        return lattice.builtin_lattice("E8")
    if kind == "zn" and arg.isdigit():
        return lattice.builtin_lattice("Zn", int(arg))
    if kind == "file" and arg:
        return lattice.load_lattice(arg)
    raise ValueError(f"unknown lattice {text!r}; use e8, zn:R or file:PATH")


def _table(f) -> str:
    rows = [(str(e), str(c)) for e, c in f.items()]
    w = max((len(e) for e, _ in rows), default=1)
    lines = [f"{e:>{w}}  {c}" for e, c in rows]
    lines.append(f"O(q^{f.order})")
    return "\n".join(lines)


# -- commands -----------------------------------------------------------------

def cmd_expand(args) -> int:
    f = evaluate(parse(args.expr), args.order)
    if args.json:
        print(SeriesDocument.from_series(f, args.expr).dumps())
    else:
        print(_table(f))
    return EXIT_OK


def cmd_decompose(args) -> int:
    k = args.weight
    dim = ringstruct.dim_qmk(k) if args.quasi else ringstruct.dim_mk(k)
    order = args.order or dim + ringstruct.VERIFY_MARGIN + 2
    f = evaluate(parse(args.expr), order)
    if args.quasi:
        p = ringstruct.decompose_quasimodular(f, k)
        names = ("E2", "E4", "E6")
    else:
        p = ringstruct.decompose_modular(f, k)
        names = ("E4", "E6")
    if not p.terms:
        print("0")
    for key, c in p.terms.items():
        mono = " ".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, key) if e) or "1"
        print(f"{mono}: {c}")
    return EXIT_OK


def cmd_dims(args) -> int:
    print("k  dim M_k  dim QM_k")
    for k in range(0, args.max + 1, 2):
        print(f"{k:<2} {ringstruct.dim_mk(k):>7}  {ringstruct.dim_qmk(k):>8}")
    return EXIT_OK


def cmd_theta(args) -> int:
    L = _lattice(args.lattice)
    f = lattice.theta_series(L, args.max_exp)
    if args.json:
        print(SeriesDocument.from_series(f, f"theta {args.lattice}").dumps())
    else:
        print(_table(f))
    return EXIT_OK


def cmd_hurwitz(args) -> int:
    cache = enumgeo.HurwitzCache(args.cache)
    rec = cache.lookup(args.degree, args.genus, args.budget)
    print(rec.count)
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    cache = enumgeo.HurwitzCache(args.cache) if args.cache else None
    failed = 0
    total = 0
    for check in run_suites(suites, args.order, args.seed, cache, args.report):
        print(check.line(), flush=True)
        total += 1
        failed += not check.passed
    print(f"{total - failed}/{total} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_numeric_check(args) -> int:
    f = evaluate(parse(args.expr), args.order)
    r = numeric.modularity_residual(f, args.weight, args.gamma, args.tau)
    print(f"residual {r:.6e}")
    return EXIT_OK if r < args.tol else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qmodular", description="Exact q-expansions of modular and quasi-modular forms.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("expand", help="expand an expression")
    s.add_argument("--expr", required=True)
    s.add_argument("--order", type=_rational, default=Fraction(10),
                   help="exclusive exponent bound (default 10)")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("decompose", help="write a form in E4, E6 (or E2, E4, E6)")
    s.add_argument("--expr", required=True)
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--quasi", action="store_true")
    s.add_argument("--order", type=int, default=None,
                   help="expansion order used for the solve (default dim + margin)")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("dims", help="dimension table")
    s.add_argument("--max", type=int, default=16)
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("theta", help="lattice theta series")
    s.add_argument("--lattice", required=True, help="e8, zn:R or file:PATH")
    s.add_argument("--max-exp", type=_rational, default=Fraction(10))
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("hurwitz", help="brute-force Hurwitz count")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--budget", type=int, default=enumgeo.DEFAULT_BUDGET)
    s.add_argument("--cache", default="./hurwitz-cache.json")
    s.set_defaults(func=cmd_hurwitz)

    s = sub.add_parser("verify", help="run invariant suites")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--order", type=int, default=DEFAULT_ORDER,
                   help="exclusive bound for the exact identities (default 61)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cache", default=None, help="Hurwitz cache file (default: none)")
    s.add_argument("--report", default="./mirror-report.json",
                   help="where the mirror suite archives its report")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("numeric-check", help="modularity residual at one point")
    s.add_argument("--expr", required=True)
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--gamma", type=_gamma, required=True, help="a,b,c,d with ad - bc = 1")
    s.add_argument("--tau", type=_tau, required=True, help="x,y with y > 0")
    s.add_argument("--order", type=int, default=300)
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_numeric_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotModular as exc:
        print(f"not modular: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (ComputationError, ZeroDivisionError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (QModularError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
