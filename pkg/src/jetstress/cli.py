"""Command-line entry point: ``jetstress <subcommand> [options]``."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import harness
from .harness import Scenario, ScenarioError

EXIT_PASS, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

# mode used for --seed runs, and the check each subcommand performs
_SUBCOMMANDS = {
    "verify-first": ("first_order", harness.verify_first_order),
    "verify-second": ("second_order", harness.verify_second_order),
    "edge-cancel": ("edge_cancel", harness.verify_edge_cancellation),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, help="tolerance override for every identity")
    common.add_argument("--quad-order", type=int, help="Gauss-Legendre points per axis")
    common.add_argument("--report", help="write the report to this path instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--fd", action="store_true", help="take derivatives by central differences")

    single = _Parser(add_help=False, parents=[common])
    src = single.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", help="path to a JSON scenario")
    src.add_argument("--seed", type=int, help="generate a random scenario from this seed")
    single.add_argument("--dim", type=int, default=2, help="base dimension n for --seed runs")
    single.add_argument("--fiber-dim", type=int, default=1, help="fiber dimension d for --seed runs")

    parser = _Parser(prog="jetstress", description="Verify stress and virtual-work identities on boxes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in _SUBCOMMANDS:
        sub.add_parser(name, parents=[single])
    sub.add_parser("suite", parents=[common], help="run every shipped scenario")
    return parser


def _scenario(args, mode: str) -> Scenario:
    if args.scenario is not None:
        try:
            sc = harness.load_scenario(args.scenario)
        except OSError as exc:
            raise ScenarioError(str(exc)) from exc
    else:
        sc = Scenario(name=f"{mode}_seed_{args.seed}", mode=mode, n=args.dim, d=args.fiber_dim, seed=args.seed)
    return _override(sc, args)


def _override(sc: Scenario, args) -> Scenario:
    changes = {}
    if args.tol is not None:
        changes["tolerance"] = args.tol
    if args.quad_order is not None:
        if args.quad_order < 1:
            raise ScenarioError("--quad-order must be positive")
        changes["quad_order"] = args.quad_order
    if args.fd:
        changes["fd"] = True
    return dataclasses.replace(sc, **changes) if changes else sc


def _emit(reports, args):
    text = harness.format_reports(reports, args.format)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
        for r in reports:
            for row in r.identities:
                status = "PASS" if row.passed else "FAIL"
                print(f"{status} {r.scenario} {row.identity} abs={row.abs_residual:.3e} rel={row.rel_residual:.3e}")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_PASS
    try:
        if args.command == "suite":
            reports = [harness.verify(_override(sc, args)) for sc in harness.shipped_scenarios()]
        else:
            mode, check = _SUBCOMMANDS[args.command]
            reports = [check(_scenario(args, mode))]
    except ScenarioError as exc:
        print(f"jetstress: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        _emit(reports, args)
    except OSError as exc:
        print(f"jetstress: cannot write report: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAIL


def main() -> None:
    sys.exit(run_cli())
