"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when a check fails or a search
budget is exceeded, 2 for bad arguments or unparsable input.
"""
from __future__ import annotations

import argparse
import sys

from .errors import AbelautError, BudgetError, InvalidDatum, ParseError
from .report import DEFAULT_Q_LIST, RunConfig, render_report, run
from .scalars import as_rational

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def _rational(text):
    try:
        return as_rational(text)
    except (ParseError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="abelaut", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--emit", choices=("text", "json"), default="text")
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--seed", type=int, default=20240607)
        sp.add_argument("--entry-bound", type=int, default=3, help="box bound for automorphism searches")
        sp.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identical output)")

    def surface_args(sp):
        sp.add_argument("--p", type=int, default=7)
        sp.add_argument("--lambda", dest="lam", type=_rational, default=None,
                        help="deformation parameter; pins it (no lambda walk) when given")
        sp.add_argument("--q", dest="q_list", type=int, action="append",
                        help="reduction prime, repeatable; default 29, 43, 71, 113")

    sp = sub.add_parser("verify-surface", help="automorphisms, freeness and smoothness of the surface")
    surface_args(sp)
    common(sp)
    sp = sub.add_parser("verify-torus", help="endomorphisms and automorphisms of a torus or decomposition")
    sp.add_argument("--input", required=True)
    common(sp)
    sp = sub.add_parser("verify-construction", help="conditions, freeness, descent and rigidity for a datum")
    sp.add_argument("--input", required=True)
    sp.add_argument("--candidates")
    common(sp)
    sp = sub.add_parser("full-paper", help="every pipeline on the shipped examples")
    surface_args(sp)
    common(sp)
    return parser


def config_from_args(args) -> RunConfig:
    kw = dict(command=args.command, seed=args.seed, emit=args.emit, entry_bound=args.entry_bound, timing=args.timing)
    if args.command in ("verify-surface", "full-paper"):
        kw.update(
            p=args.p,
            lam=args.lam if args.lam is not None else as_rational(1),
            lambda_pinned=args.lam is not None,
            q_list=tuple(args.q_list) if args.q_list else DEFAULT_Q_LIST,
        )
    else:
        kw["input"] = args.input
        kw["candidates"] = getattr(args, "candidates", None)
    return RunConfig(**kw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report = run(config)
    except (ParseError, InvalidDatum, ValueError) as exc:
        print(f"abelaut: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetError as exc:
        print(f"abelaut: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except AbelautError as exc:
        print(f"abelaut: verification error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    data = render_report(report, args.emit)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return EXIT_OK if report.all_passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
