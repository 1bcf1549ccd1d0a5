"""Command-line entry point.

Exit codes: 0 all checks pass, 1 some check failed, 2 bad config or input
(nothing written), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .oracles import catalog_listing
from .scenario import EXIT_CONFIG, EXIT_OK, dump_grid, run_scenario, verify_all


def _overrides(args: argparse.Namespace) -> dict:
    return {"tol": args.tol, "nodes": args.nodes, "seed": args.seed}


def _numeric_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="quadrature tolerance override")
    p.add_argument("--nodes", type=int, default=None, help="quadrature node cap override")
    p.add_argument("--seed", type=int, default=None, help="sampling seed override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hartogs", description="Evaluate and verify holomorphic extensions across compact holes.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario config")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", required=True, type=Path)
    _numeric_flags(run)

    va = sub.add_parser("verify-all", help="run every scenario in a directory (bundled suite by default)")
    va.add_argument("--config", type=Path, default=None, help="directory of scenario configs")
    va.add_argument("--out", required=True, type=Path)
    va.add_argument("--parallel", type=int, default=1, help="worker processes")
    _numeric_flags(va)

    grid = sub.add_parser("grid", help="dump companion values over a line grid as CSV")
    grid.add_argument("--config", required=True, type=Path)
    grid.add_argument("--out", required=True, type=Path)
    _numeric_flags(grid)

    sub.add_parser("catalog-list", help="list catalog function ids")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG

    if args.command == "catalog-list":
        for cid, desc in catalog_listing():
            print(f"{cid}\t{desc}")
        return EXIT_OK

    if args.command == "run":
        outcome = run_scenario(args.config, args.out, _overrides(args))
        if outcome.error:
            print(f"{outcome.scenario_id}: {outcome.error}", file=sys.stderr)
        for r in outcome.reports:
            print(f"{outcome.scenario_id}\t{r.check_id}\t{'pass' if r.passed else 'FAIL'}\t{r.worst_violation:.3g}")
        return outcome.status

    if args.command == "verify-all":
        if args.parallel < 1:
            print("--parallel must be at least 1", file=sys.stderr)
            return EXIT_CONFIG
        status, outcomes = verify_all(args.config, args.out, _overrides(args), args.parallel)
        if not outcomes:
            print("no scenario configs found", file=sys.stderr)
        for o in outcomes:
            line = f"{o.scenario_id}\tstatus {o.status}"
            print(line + (f"\t{o.error}" if o.error else ""))
        return status

    return dump_grid(args.config, args.out, _overrides(args))


if __name__ == "__main__":
    sys.exit(main())
