"""Command-line entry point: ``lattice-ctqw`` / ``python3 -m lattice_ctqw``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def parse_range(text: str, integer: bool = False) -> np.ndarray:
    """``start:stop:count`` (inclusive, count points) or a comma list."""
    try:
        if ":" in text:
            a, b, c = text.split(":")
            count = int(c)
            if count < 1:
                raise ValueError
            vals = np.linspace(float(a), float(b), count)
        else:
            vals = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}, expected start:stop:count") from None
    if integer:
        return vals.round().astype(int)
    return vals


def parse_int_range(text: str) -> list[int]:
    """``start:stop:step`` with inclusive stop, or a comma list of integers."""
    try:
        if ":" in text:
            a, b, c = (int(v) for v in text.split(":"))
            return list(range(a, b + 1, c))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _scheme(args):
    from .abelian import GroupSpec
    from .scheme import build_honeycomb, build_scheme

    if args.kind == "honeycomb":
        return build_honeycomb(args.m)
    n = 2 if args.kind == "hexagonal" else args.n
    return build_scheme(GroupSpec(args.m, n), symmetric=not args.asymmetric)


def _common(p: argparse.ArgumentParser, kinds=("hexagonal", "honeycomb", "zmn")) -> None:
    p.add_argument("--kind", choices=kinds, default=kinds[0])
    p.add_argument("--m", type=int, default=3, help="modulus, at least 3")
    p.add_argument("--n", type=int, default=2, help="rank (zmn only)")
    p.add_argument("--asymmetric", action="store_true", help="keep z and zbar classes apart")


def cmd_scheme(args) -> int:
    s = _scheme(args)
    _emit(s.to_json(indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_walk(args) -> int:
    from .spectral import amplitudes_exact, amplitudes_infinite, amplitudes_oracle, series_csv

    meta = {"kind": args.kind, "m": args.m, "n": args.n, "time_grid": args.t}
    if args.infinite:
        labels = None
        series = amplitudes_infinite(args.kind, labels, parse_range(args.t), args.points, args.n)
        oracle = None
    else:
        s = _scheme(args)
        meta.update({"symmetric": s.symmetric, "classes": len(s)})
        table = None
        if args.polynomials:
            from .polynomials import build_polynomials

            table = build_polynomials(s)
        times = parse_range(args.t)
        series = amplitudes_exact(s, times, table)
        oracle = None
        if args.oracle:
            try:
                oracle = amplitudes_oracle(s, times, cap=args.oracle_cap)
            except ValueError as e:
                print(f"error: {e}", file=sys.stderr)
                return EXIT_FAIL
    if args.format == "svg":
        from .svg import line_chart

        names = {f"stratum {lab}": series.probability[:, c] for c, lab in enumerate(series.labels)}
        _emit(line_chart(series.times, names, f"{args.kind} m={args.m}", "t", "probability"), args.out)
    elif args.format == "json":
        payload = {
            "meta": meta,
            "times": series.times.tolist(),
            "labels": [list(lab) for lab in series.labels],
            "sizes": series.sizes.tolist(),
            "vertex": [[[z.real, z.imag] for z in row] for row in series.vertex],
        }
        _emit(json.dumps(payload) + "\n", args.out)
    else:
        _emit(series_csv(series, meta, oracle), args.out)
    if oracle is not None:
        diff = float(np.abs(series.vertex - oracle.vertex).max())
        print(f"max |exact - oracle| = {diff:.3g}", file=sys.stderr)
    return EXIT_OK


def cmd_converge(args) -> int:
    from .asymptotics import convergence_csv, convergence_table

    recs = convergence_table(args.kind, args.ms, args.t, args.points)
    _emit(convergence_csv(recs, {"kind": args.kind}), args.out)
    if args.svg:
        from .svg import line_chart

        chart = line_chart(
            [r.m for r in recs],
            {"pi (quadrature)": [r.pi for r in recs], "pi (stationary phase)": [r.pi_stationary for r in recs]},
            f"{args.kind}, t = {args.t:g}",
            "m",
            "pi(m, t)",
        )
        Path(args.svg).write_text(chart)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    kinds = [args.kind] if args.kind else ["hexagonal", "honeycomb"]
    ms = args.m or [3, 4, 5]
    checks = run_suite(kinds, ms, args.n)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_stationary(args) -> int:
    from .asymptotics import PhaseFunction, find_stationary_points

    kinds = ["hexagonal"] if args.kind == "hexagonal" else ["honeycomb-plus", "honeycomb-minus"]
    reports = [find_stationary_points(PhaseFunction(k), args.grid).to_dict() for k in kinds]
    _emit(json.dumps(reports, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_polys(args) -> int:
    from .polynomials import build_polynomials
    from .scheme import SchemeError

    try:
        t = build_polynomials(_scheme(args))
    except SchemeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    _emit((t.to_json(indent=1) if args.json else t.pretty()) + "\n", args.out)
    return EXIT_OK


def cmd_susy(args) -> int:
    from .susy import build_susy, report_json

    text = report_json(build_susy(args.m), indent=1)
    _emit(text + "\n", args.out)
    return EXIT_OK if json.loads(text)["all_pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lattice-ctqw", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("scheme", help="export a scheme as JSON")
    _common(q)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_scheme)

    q = sub.add_parser("walk", help="amplitude time series")
    _common(q)
    q.add_argument("--t", default="0:10:101", help="start:stop:count")
    q.add_argument("--oracle", action="store_true", help="add dense-oracle columns")
    q.add_argument("--oracle-cap", type=int, default=4096)
    q.add_argument("--polynomials", action="store_true", help="evaluate class polynomials")
    q.add_argument("--infinite", action="store_true", help="infinite lattice, origin stratum")
    q.add_argument("--points", type=int, default=None, help="quadrature points per dimension")
    q.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_walk)

    q = sub.add_parser("converge", help="pi(m, t) table")
    q.add_argument("--kind", choices=("hexagonal", "honeycomb"), default="hexagonal")
    q.add_argument("--ms", type=parse_int_range, default=parse_int_range("10:80:5"))
    q.add_argument("--t", type=float, default=1000.0)
    q.add_argument("--points", type=int, default=None)
    q.add_argument("--out", default=None)
    q.add_argument("--svg", default=None, help="also write a chart here")
    q.set_defaults(func=cmd_converge)

    q = sub.add_parser("verify", help="run the invariant suite")
    q.add_argument("--kind", choices=("hexagonal", "honeycomb", "zmn"), default=None)
    q.add_argument("--m", type=int, action="append", help="repeatable; default 3, 4, 5")
    q.add_argument("--n", type=int, default=2)
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("stationary", help="stationary points as JSON")
    q.add_argument("--kind", choices=("hexagonal", "honeycomb"), default="hexagonal")
    q.add_argument("--grid", type=int, default=96)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_stationary)

    q = sub.add_parser("polys", help="class polynomials")
    _common(q)
    q.add_argument("--json", action="store_true")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_polys)

    q = sub.add_parser("susy", help="supersymmetry checks for the honeycomb")
    q.add_argument("--m", type=int, default=3)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_susy)
    return p


def _validate(p: argparse.ArgumentParser, args) -> None:
    for name in ("m",):
        v = getattr(args, name, None)
        vals = v if isinstance(v, list) else [v]
        if any(x is not None and x < 3 for x in vals):
            p.error("--m must be at least 3")
    if getattr(args, "n", 2) < 1:
        p.error("--n must be at least 1")
    pts = getattr(args, "points", None)
    if pts is not None and pts < 16:
        p.error("--points must be at least 16")
    if getattr(args, "kind", None) == "honeycomb" and getattr(args, "n", 2) != 2:
        p.error("the honeycomb is two-dimensional")
    if getattr(args, "ms", None) and min(args.ms) < 3:
        p.error("--ms values must be at least 3")
    t = getattr(args, "t", None)
    if isinstance(t, str):
        try:
            parse_range(t)
        except argparse.ArgumentTypeError as e:
            p.error(str(e))


def main(argv: list[str] | None = None) -> int:
    p = build_parser()
    args = p.parse_args(argv)
    _validate(p, args)
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
