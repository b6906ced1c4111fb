"""Command-line interface.

    kplane-audit run --suite <name> [--d D --k K --samples N --seed S
                                     --tol T --out PATH --format json|markdown
                                     --workers W]
    kplane-audit suites

Exit codes: 0 all pass/fail records pass, 1 any record fails, 2 configuration
error.  The default seed comes from KPLANE_AUDIT_SEED when set; the --seed
flag wins.  JSON reports are byte-identical for identical configurations.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .records import emit_report, overall_exit_code
from .runner import DEFAULT_SEED, SUITES, ConfigError, SuiteConfig, run_suite, run_suites


def _default_seed() -> int:
    env = os.environ.get("KPLANE_AUDIT_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError as exc:
        raise ConfigError(f"KPLANE_AUDIT_SEED must be an integer, got {env!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kplane-audit", description="Numerical audit suites for sharp k-plane space-time estimates")
    sub = parser.add_subparsers(dest="command", required=True)

    run_cmd = sub.add_parser("run", help="Run one audit suite (or 'all') and emit a report")
    run_cmd.add_argument("--suite", required=True, help=f"one of: {', '.join(SUITES)}, or 'all'")
    run_cmd.add_argument("--d", type=int, default=None, help="ambient dimension override (suite-specific)")
    run_cmd.add_argument("--k", type=int, default=None, help="plane dimension override (suite-specific)")
    run_cmd.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count override")
    run_cmd.add_argument("--seed", type=int, default=None, help="64-bit seed; default from KPLANE_AUDIT_SEED or built-in")
    run_cmd.add_argument("--tol", type=float, default=None, help="primary tolerance override (suite-specific)")
    run_cmd.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")
    run_cmd.add_argument("--format", choices=("json", "markdown"), default="json")
    run_cmd.add_argument("--workers", type=int, default=1, help="parallel workers for Monte Carlo chunks")

    sub.add_parser("suites", help="List available suites")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "suites":
        for name in SUITES:
            print(name)
        return 0

    try:
        seed = args.seed if args.seed is not None else _default_seed()
        names = list(SUITES) if args.suite == "all" else [args.suite]
        base = SuiteConfig(
            suite=names[0],
            d=args.d,
            k=args.k,
            samples=args.samples,
            seed=seed,
            tol=args.tol,
            workers=args.workers,
        )
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    records = run_suites(names, base) if args.suite == "all" else run_suite(base)
    document = emit_report(records, format=args.format)
    if args.out is None:
        sys.stdout.write(document)
    else:
        try:
            args.out.write_text(document)
        except OSError as exc:
            print(f"cannot write report to {args.out}: {exc}", file=sys.stderr)
            return 2
    return overall_exit_code(records)


if __name__ == "__main__":
    raise SystemExit(main())
