"""Command-line interface.

Subcommands:

* snr        evaluate every curve of a scenario at its nominal point
* optimize   report the constrained-optimal amplification gains
* threshold  report the required-amplification verdicts
* sweep      run the scenario's sweep and emit CSV
* validate   run the brute-force oracle suite (seeded, deterministic)
* figures    run every shipped scenario file and write one CSV each

All output is CSV (`--format csv` is accepted for explicitness). Failures
print a single machine-readable line `error: <message>` to stderr and exit
nonzero (2 for scenario/usage problems, 1 for runtime failures).
"""

from __future__ import annotations

import argparse
import math
import sys
from importlib import resources
from pathlib import Path

from .scenario import Scenario, ScenarioError, load_scenario
from .sweep import SweepTable, emit_csv, evaluate_curves, run_sweep
from .validate import run_all_checks

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaysnr",
        description=(
            "Uplink SNR analysis for passive/active RIS and NCR assisted links: "
            "closed forms, required-amplification thresholds, sweeps, and a "
            "brute-force validation suite."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, scenario_required=True):
        cmd = sub.add_parser(name, help=help_text)
        if scenario_required:
            cmd.add_argument("--scenario", required=True, help="scenario file path")
        cmd.add_argument("--out", help="output path (default: stdout)")
        cmd.add_argument("--seed", type=int, default=None, help="64-bit RNG seed")
        cmd.add_argument("--format", choices=["csv"], default="csv")
        return cmd

    add("snr", "evaluate curve SNRs at the scenario's nominal point")
    add("optimize", "report constrained-optimal amplification gains")
    add("threshold", "report required-amplification verdicts")
    add("sweep", "run the scenario sweep and emit CSV")
    add("validate", "run the oracle validation suite", scenario_required=False)
    figures = add("figures", "run all shipped scenarios", scenario_required=False)
    figures.add_argument(
        "--out-dir", default="figures_out", help="directory for the CSV outputs"
    )
    return parser


def _write_table(table: SweepTable, out: str | None) -> None:
    if out is None:
        emit_csv(table, sys.stdout)
    else:
        emit_csv(table, out)


def _nominal_table(scenario: Scenario, command: str) -> SweepTable:
    results = evaluate_curves(scenario)
    if command == "snr":
        if scenario.mode != "snr":
            raise ScenarioError("the snr command needs a scenario with mode snr")
        columns = ("curve", "snr (dB)", "alpha (linear)")
        rows = [
            (r.label, r.snr.db, r.alpha if r.alpha is not None else "")
            for r in results
        ]
    elif command == "optimize":
        if scenario.mode != "snr":
            raise ScenarioError("the optimize command needs a scenario with mode snr")
        columns = ("curve", "alpha (linear)", "case", "snr (dB)")
        rows = [
            (r.label, r.alpha, r.case.value if r.case else "fixed", r.snr.db)
            for r in results
            if r.alpha is not None
        ]
        if not rows:
            raise ScenarioError("no ncr or active_ris curves to optimize")
    else:  # threshold
        if scenario.mode != "required_alpha":
            raise ScenarioError(
                "the threshold command needs a scenario with mode required_alpha"
            )
        columns = ("curve", "alpha_min (linear)", "alpha_max (linear)", "verdict")
        rows = [
            (
                r.label,
                r.verdict.required_alpha(),
                r.verdict.alpha_max if r.verdict.alpha_max is not None else math.inf,
                r.verdict.kind.value,
            )
            for r in results
        ]
    return SweepTable(columns, tuple(rows))


def _run_validate(args) -> int:
    seed = args.seed if args.seed is not None else 2024
    checks = run_all_checks(seed)
    lines = [check.line() for check in checks]
    output = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(output)
    else:
        Path(args.out).write_text(output, encoding="utf-8")
    return 0 if all(check.passed for check in checks) else 1


def shipped_scenarios():
    """(name, text) pairs of the scenario files shipped with the package."""
    package = resources.files("relaysnr.scenarios")
    for entry in sorted(package.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".scn"):
            yield entry.name[: -len(".scn")], entry.read_text(encoding="utf-8")


def _run_figures(args) -> int:
    from .scenario import parse_scenario

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in shipped_scenarios():
        scenario = parse_scenario(text)
        table = run_sweep(scenario)
        destination = out_dir / f"{name}.csv"
        emit_csv(table, destination)
        print(f"wrote {destination}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _run_validate(args)
        if args.command == "figures":
            return _run_figures(args)
        scenario = load_scenario(args.scenario)
        if args.command == "sweep":
            table = run_sweep(scenario)
        else:
            table = _nominal_table(scenario, args.command)
        _write_table(table, args.out)
        return 0
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
