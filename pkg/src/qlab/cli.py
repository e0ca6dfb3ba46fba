"""Command line entry point: ``qlab run <name> [--param k=v]... [--seed S] [--out DIR]``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or
parameter errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiments
from .errors import ParameterOutOfRange, QlabError, UnknownExperiment
from .io import write_csv, write_json


def _parse_params(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ParameterOutOfRange(f"--param expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with ``run`` and ``list`` subcommands."""
    parser = argparse.ArgumentParser(prog="qlab", description="Run qlab experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("name", help="experiment name")
    run.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="override a parameter (repeatable)")
    run.add_argument("--seed", type=int, default=0, help="integer seed (default 0)")
    run.add_argument("--out", type=Path, default=None, help="output directory")
    sub.add_parser("list", help="list experiments and their default parameters")
    return parser


def write_report(report: experiments.ExperimentReport, out: Path) -> None:
    """Write ``report.json`` and one ``<table>.csv`` per table into ``out``."""
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "report.json", report.to_json())
    for name, columns in report.tables.items():
        write_csv(out / f"{name}.csv", columns)


def main(argv=None) -> int:
    """CLI entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name in experiments.names():
            params = " ".join(f"{k}={v}" for k, v in experiments.defaults(name).items())
            print(f"{name}: {params}")
        return 0
    try:
        report = experiments.run(args.name, _parse_params(args.param), args.seed)
    except (UnknownExperiment, ParameterOutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QlabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.out is not None:
        write_report(report, args.out)
    for key, value in report.metrics.items():
        print(f"{key} = {value}")
    for key, ok in report.checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {key}")
    print(f"{report.name}: {'PASS' if report.passed else 'FAIL'} ({report.wall_time:.2f} s)")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
