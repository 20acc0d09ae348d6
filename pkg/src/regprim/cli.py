"""Command line front end.

Exit codes: 0 on success, 1 on a domain error (the error class name is
printed on stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import serialize
from .distribution import Distribution, IntervalSpec, alexiewicz_norm, integrate, integrate_interval
from .errors import RegPrimError
from .lattice_algebra import absolute, join, jordan, meet, order_leq, product
from .piecewise import PiecewiseFn, evaluate, sup_norm
from .reproduce import worked_rows
from .spaces import BVFunction, Multiplier, RegulatedPrimitive

DEFAULT_TOL = "1/1000000000"


class UsageError(Exception):
    pass


def fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def decimal(q: Fraction, digits: int = 15) -> str:
    return f"{float(q):.{digits}g}"


def _load(path: str):
    try:
        return serialize.load(path)
    except RegPrimError:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _distribution(path: str) -> Distribution:
    obj = _load(path)
    if isinstance(obj, RegulatedPrimitive):
        return Distribution(1, obj)
    if not isinstance(obj, Distribution):
        raise UsageError(f"{path} does not hold a distribution")
    return obj


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational: {text!r}") from exc


def _multiplier(path: str, order: int, lam) -> Multiplier:
    obj = _load(path)
    if isinstance(obj, Multiplier):
        return obj
    if isinstance(obj, PiecewiseFn):
        obj = BVFunction(obj)
    if not isinstance(obj, BVFunction):
        raise UsageError(f"{path} does not hold a multiplier")
    if obj.normalization is None and lam is not None and order >= 1:
        obj = BVFunction.normalized(obj.fn, lam)
    return Multiplier(order, obj)


def cmd_integrate(args) -> int:
    f = _distribution(args.dist)
    lam = None if args.lam is None else _rational(args.lam)
    if args.interval is not None:
        try:
            spec = IntervalSpec.parse(args.interval)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        g = None
        if args.mult is not None:
            g = _multiplier(args.mult, 0, lam).g.fn
        value = integrate_interval(f, spec, g)
    else:
        if args.mult is None:
            raise UsageError("--mult is required without --interval")
        value = integrate(f, _multiplier(args.mult, f.order - 1, lam), lam)
    print(fmt(value))
    print(decimal(value))
    return 0


def cmd_eval(args) -> int:
    obj = _load(args.fn)
    if isinstance(obj, Distribution):
        fn = obj.F
    elif isinstance(obj, Multiplier):
        fn = obj.g.fn
    else:
        fn = obj if isinstance(obj, PiecewiseFn) else obj.fn
    try:
        value = evaluate(fn, args.at)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point {args.at!r}") from exc
    print(fmt(value))
    return 0


def cmd_norm(args) -> int:
    obj = _load(args.input)
    tol = _rational(args.tol)
    if isinstance(obj, Distribution):
        lo, hi = alexiewicz_norm(obj, tol)
    elif isinstance(obj, Multiplier):
        lo, hi = obj.g.bv_norm(tol)
    elif isinstance(obj, BVFunction):
        lo, hi = obj.bv_norm(tol)
    else:
        fn = obj if isinstance(obj, PiecewiseFn) else obj.fn
        lo, hi = sup_norm(fn, tol)
    print(f"[{fmt(lo)}, {fmt(hi)}]")
    return 0


def _emit(obj, **extra) -> None:
    doc = serialize.to_document(obj)
    doc.update(extra)
    print(json.dumps(doc, sort_keys=True))


def cmd_lattice(args) -> int:
    a = _distribution(args.a)
    b = _distribution(args.b) if args.b else None
    if args.op in ("join", "meet", "leq") and b is None:
        raise UsageError(f"--b is required for {args.op}")
    if args.op == "leq":
        print(order_leq(a, b).value)
    elif args.op == "jordan":
        jd = jordan(a)
        _emit(jd.plus, part="plus", exact=jd.exact)
        _emit(jd.minus, part="minus", exact=jd.exact)
    else:
        res = {"join": lambda: join(a, b), "meet": lambda: meet(a, b), "abs": lambda: absolute(a)}[
            args.op
        ]()
        _emit(res.value, exact=res.exact)
    return 0


def cmd_product(args) -> int:
    _emit(product(_distribution(args.a), _distribution(args.b)))
    return 0


def cmd_reproduce(args) -> int:
    rows = worked_rows()
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["case", "paper_value", "computed_value", "status"])
    for case, expected, computed, ok in rows:
        out.writerow([case, expected, computed, "PASS" if ok else "FAIL"])
    return 0 if all(r[3] for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regprim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="pair a distribution with a multiplier")
    p.add_argument("--dist", required=True)
    p.add_argument("--mult")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--interval", help='e.g. "{0}", "(0,1)", "[0,inf)"')
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("eval", help="evaluate a function (or a primitive) at a point")
    p.add_argument("--fn", required=True)
    p.add_argument("--at", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("norm", help="certified norm enclosure")
    p.add_argument("input")
    p.add_argument("--tol", default=DEFAULT_TOL)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("lattice", help="order and lattice operations")
    p.add_argument("op", choices=["join", "meet", "abs", "jordan", "leq"])
    p.add_argument("--a", required=True)
    p.add_argument("--b")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("product", help="algebra product of two distributions")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser(
        "reproduce-paper", aliases=["reproduce"], help="recompute the worked values as CSV"
    )
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RegPrimError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
