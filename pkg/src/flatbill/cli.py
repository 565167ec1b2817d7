"""Command-line entry point.

Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.  Errors
are reported as a JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import exactnum
from .exactnum import CyclotomicError

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors get the JSON treatment."""

    def error(self, message):
        raise UsageError(message)


def _emit(obj, fmt: str, out=None) -> None:
    if fmt == "json":
        text = json.dumps(obj, indent=2, sort_keys=True, default=str)
    elif isinstance(obj, str):
        text = obj.rstrip("\n")
    else:
        text = "\n".join(f"{k}: {v}" for k, v in obj.items())
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _polygon(text):
    from .polygon import as_realized, parse_polygon

    obj = parse_polygon(text)
    return obj, as_realized(obj)


def _point(text: str):
    from .blocking import PointSpec

    return PointSpec.parse(text)


# -- subcommands -------------------------------------------------------------

def cmd_unfold(args):
    from .unfold import holonomy_surface, partial_unfold, pillowcase_double, stratum_of, unfold

    _, P = _polygon(args.polygon)
    make = {"full": unfold, "partial": partial_unfold, "holonomy": holonomy_surface,
            "pillowcase": pillowcase_double}[args.mode]
    S = make(P)
    S.verify()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(S.dumps() + "\n")
    info = {"mode": args.mode, "kind": S.kind, "triangles": len(S.triangles), "copies": len(S.copies),
            "genus": S.genus, "area": {"exact": str(S.area()), "float": float(S.area())}}
    if S.kind != "cone":
        info["stratum"] = str(stratum_of(S))
    if args.format == "json" and not args.out:
        info["surface"] = S.to_json()
    _emit(info, args.format)


def cmd_count(args):
    from .counting import compare_to_prediction, count_periodic_billiards

    spec, P = _polygon(args.polygon)
    series = count_periodic_billiards(P, args.L, normalize=args.normalize or args.estimate)
    if args.format == "json":
        payload = series.to_json()
    else:
        payload = series.to_csv()
    report = None
    if args.estimate:
        c = _predicted_constant(spec)
        report = compare_to_prediction(series, float(c), area=1.0)
        if args.format == "json":
            payload["estimate"] = report.to_json()
            payload["estimate"]["predicted_exact"] = c.exact()
    _emit(payload, args.format, args.out)
    if report is not None and args.format != "json":
        print(f"# estimate {report.estimate:.6g} predicted {report.predicted:.6g} "
              f"({c.exact()}) deviation {report.deviation:.3%}", file=sys.stderr)


def _predicted_constant(spec):
    from . import svconstants as sv

    fam = getattr(spec, "family", None)
    p = getattr(spec, "params", {})
    if fam == "right_triangle":
        return sv.c_right_triangle(p["a"], p["n"])
    if fam == "isosceles":
        return sv.c_isosceles(p["a"], p["b"], p["n"])
    if fam == "parallelogram":
        return sv.c_parallelogram(p["a"], p["b"], p["n"])
    if fam == "right_trapezoid":
        return sv.c_right_trapezoid(p["a"], p["b"], p["n"])
    raise ValueError(f"no predicted constant for polygon family {fam!r}")


def cmd_diagonals(args):
    from .counting import count_generalized_diagonals

    _, P = _polygon(args.polygon)
    z1, z2 = _point(args.p1).resolve(P), _point(args.p2).resolve(P)
    series = count_generalized_diagonals(P, z1, z2, args.L, normalize=args.normalize,
                                         illumination=z1 == z2)
    _emit(series.to_json() if args.format == "json" else series.to_csv(), args.format, args.out)


def cmd_classify(args):
    from . import classify as cl

    fam = args.family
    need = {"right": ("a", "n"), "iso": ("a", "b", "n"), "para": ("a", "b", "n"),
            "rtrap": ("a", "b", "n")}
    if fam == "almost":
        if not args.signature:
            raise UsageError("classify almost needs --signature")
        sig = [Fraction(x) for x in args.signature.strip("[]").split(",")]
        res = cl.classify_almost_right(sig)
    else:
        missing = [k for k in need[fam] if getattr(args, k) is None]
        if missing:
            raise UsageError(f"classify {fam} needs --{' --'.join(missing)}")
        vals = [getattr(args, k) for k in need[fam]]
        fn = {"right": cl.classify_right, "iso": cl.classify_isosceles, "para": cl.classify_parallelogram,
              "rtrap": cl.classify_right_trapezoid}[fam]
        res = fn(*vals)
    out = res.to_json()
    if fam == "right":
        out["eigenspace_dims"] = {str(l): cl.eigenspace_dim(args.a, args.n, l)
                                  for l in range(1, 2 * args.n) if l != args.n}
    _emit(out if args.format == "json" else {"kind": res.kind, "summary": res.summary(), "rank": res.rank,
                                              "stratum": str(res.stratum) if res.stratum else ""},
          args.format)


def cmd_blocking(args):
    from .blocking import empirical_illumination, verdict
    from .polygon import parse_polygon

    spec = parse_polygon(args.polygon)
    p1, p2 = _point(args.p1), _point(args.p2)
    v = verdict(spec, p1, p2)
    out = v.to_json()
    if args.check:
        avoid = list(v.points) if v.blocked else []
        res = empirical_illumination(spec, p1, p2, args.check, avoid)
        out["illumination"] = res.to_json()
        out["consistent"] = res.found != v.blocked
    _emit(out if args.format == "json" else {k: out[k] for k in ("blocked", "blocking_set", "provenance")},
          args.format)


def cmd_sv(args):
    from . import svconstants as sv

    def need(*names):
        vals = [getattr(args, n) for n in names]
        if any(v is None for v in vals):
            raise UsageError(f"sv {args.which} needs --{' --'.join(names)}")
        return vals

    w = args.which
    if w in ("cyl", "env", "simp"):
        k1, k2 = need("k1", "k2")
        c = {"cyl": sv.c_cyl_stratum, "env": sv.c_env_stratum, "simp": sv.c_simp_stratum}[w](k1, k2)
    elif w == "saddle":
        c = sv.c_saddle(*need("d1", "d2"))
    elif w == "right":
        c = sv.c_right_triangle(*need("a", "n"))
    elif w == "iso":
        c = sv.c_isosceles(*need("a", "b", "n"))
    elif w == "para":
        c = sv.c_parallelogram(*need("a", "b", "n"))
    else:
        c = sv.c_right_trapezoid(*need("a", "b", "n"))
    _emit(c.to_json() if args.format == "json" else c.exact(), args.format)


def cmd_estimate(args):
    from .counting import compare_to_prediction, count_periodic_billiards, weak_asymptotic_estimate

    spec, P = _polygon(args.polygon)
    series = count_periodic_billiards(P, args.L, normalize=True)
    lines = []
    steps = max(2, args.points)
    for i in range(1, steps + 1):
        x = 1 + (args.L - 1) * i / steps
        lines.append(f"{x:.6g} {weak_asymptotic_estimate(series, x):.10g}")
    trace = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(trace)
    try:
        c = _predicted_constant(spec)
    except ValueError:
        c = None
    if args.format == "json":
        out = {"L": args.L, "bands": series.total, "meta": series.meta,
               "trace": [[float(a) for a in ln.split()] for ln in lines]}
        if c is not None:
            out["report"] = compare_to_prediction(series, float(c), area=1.0).to_json()
            out["report"]["predicted_exact"] = c.exact()
        _emit(out, "json")
    elif not args.out:
        sys.stdout.write(trace)


def cmd_selftest(args):
    from .selftest import run_selftest

    grid = None
    if args.grid:
        text = args.grid.replace(" ", "")
        if not text.startswith("n<="):
            raise UsageError("--grid expects the form n<=N")
        grid = int(text[3:])
    ok = run_selftest(grid=grid, fixture=args.fixture, stream=sys.stdout)
    return EXIT_OK if ok else EXIT_DOMAIN


# -- argument parsing -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--precision", type=int, default=None, help="bit cap for certified sign evaluation")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is sequential")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file")

    p = _Parser(prog="flatbill", description="Exact tools for rational billiards and their unfoldings.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("unfold", parents=[common], help="build an unfolding and report its invariants")
    s.add_argument("--polygon", required=True)
    s.add_argument("--mode", choices=("full", "partial", "holonomy", "pillowcase"), default="full")
    s.set_defaults(func=cmd_unfold)

    s = sub.add_parser("count", parents=[common], help="count periodic billiard bands")
    s.add_argument("--polygon", required=True)
    s.add_argument("--L", type=float, required=True)
    s.add_argument("--normalize", action="store_true", help="rescale the polygon to unit area")
    s.add_argument("--estimate", action="store_true", help="compare with the predicted constant (unit area)")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("diagonals", parents=[common], help="count generalized diagonals between two points")
    s.add_argument("--polygon", required=True)
    s.add_argument("--p1", required=True)
    s.add_argument("--p2", required=True)
    s.add_argument("--L", type=float, required=True)
    s.add_argument("--normalize", action="store_true")
    s.set_defaults(func=cmd_diagonals)

    s = sub.add_parser("classify", parents=[common], help="orbit closure of the unfolding")
    s.add_argument("family", choices=("right", "iso", "para", "rtrap", "almost"))
    for k in ("a", "b", "n"):
        s.add_argument(f"--{k}", type=int)
    s.add_argument("--signature", help="angle list for almost-right polygons, e.g. [1/2,3/4,...]")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("blocking", parents=[common], help="finite blocking verdict for two points")
    s.add_argument("--polygon", required=True)
    s.add_argument("--p1", required=True)
    s.add_argument("--p2", required=True)
    s.add_argument("--check", type=float, default=None, help="also search for a witness up to this length")
    s.set_defaults(func=cmd_blocking)

    s = sub.add_parser("sv", parents=[common], help="Siegel-Veech constants")
    s.add_argument("which", choices=("cyl", "env", "simp", "saddle", "right", "iso", "para", "rtrap"))
    for k in ("k1", "k2", "d1", "d2", "a", "b", "n"):
        s.add_argument(f"--{k}", type=int)
    s.set_defaults(func=cmd_sv)

    s = sub.add_parser("estimate", parents=[common], help="weak-asymptotic trace (L, estimate) at unit area")
    s.add_argument("--polygon", required=True)
    s.add_argument("--L", type=float, required=True)
    s.add_argument("--points", type=int, default=20, help="number of trace rows")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("selftest", parents=[common], help="run the exact invariant suite")
    s.add_argument("--grid", default=None, help="classifier conformance grid, e.g. n<=25")
    s.add_argument("--fixture", default=None, help="surface file to verify as well")
    s.set_defaults(func=cmd_selftest)
    return p


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message, "exit_code": code}), file=sys.stderr)
    return code


def run(argv=None) -> int:
    parser = build_parser()
    cap = exactnum.PRECISION_CAP
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be positive")
        if getattr(args, "precision", None):
            exactnum.PRECISION_CAP = args.precision
        code = args.func(args)
        return EXIT_OK if code is None else code
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except (ValueError, ArithmeticError, CyclotomicError, RuntimeError, OSError) as exc:
        return _fail(EXIT_DOMAIN, type(exc).__name__, str(exc))
    finally:
        exactnum.PRECISION_CAP = cap


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
