"""Command-line entry point: ``germcodim <subcommand> <file>``."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .germ import Options
from .germ_io import ParseError, parse_instance, render_report
from .report import EXIT_USAGE, run

_STAGE = {"check": "check", "invariants": "invariants", "codim": "codim", "verify": "verify", "report": "verify"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="germcodim", description="Exact invariants of parametrized curve germs.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "finiteness and primitivity only",
        "invariants": "delta, conductor, multiplicity, m1, type",
        "codim": "invariants plus A_e- and L_e-codimension",
        "verify": "full run with every identity checked",
        "report": "same as verify; pick the output with --format",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("file", help="instance file, or - for stdin")
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--trunc-start", type=int, default=None)
        p.add_argument("--trunc-max", type=int, default=512)
        p.add_argument("--quasihomogeneous", action=argparse.BooleanOptionalAction, default=None,
                       help="assert (or deny) quasihomogeneity; detected for weighted monomial input otherwise")
    return parser


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        options = Options(args.trunc_start, args.trunc_max, args.quasihomogeneous, args.format)
    except ValueError as exc:
        print(f"germcodim: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        print(f"germcodim: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        instance = parse_instance(text, options)
    except ParseError as exc:
        print(f"{args.file}:{exc.line}:{exc.column}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    outcome = run(instance, _STAGE[args.command])
    sys.stdout.write(render_report(outcome, args.format))
    return outcome.exit_code


def main() -> None:
    sys.exit(cli_main())
