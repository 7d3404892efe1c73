"""Command line entry point.

    warpspec <subcommand> --config <path> [--out <dir>] [--seed <n>]

Exit codes: 0 all checks passed, 1 a tolerance check failed (report still
written), 2 the config could not be parsed, 3 a numeric precondition or
solver failure surfaced from the library (printed with its module-qualified
code). The only environment variable consulted is WARPSPEC_THREADS, which
caps worker threads in the direct quadratures.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

try:
    import tomllib as tomli  # Python >= 3.11
except ModuleNotFoundError:
    import tomli

from .errors import CheckFailed, ConfigParseError, WarpspecError
from .runners import ExperimentConfig, Report, run

SUBCOMMANDS = ("transform", "verify-biorth", "distribution", "evolve", "orthogonality", "suite")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warpspec",
        description="Run time-warp transform, distribution, and propagation experiments.",
    )
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand")
    sub.required = True
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        p.add_argument("--config", required=True, help="TOML experiment config")
        p.add_argument("--out", default=None, help="artifact directory (default: alongside config)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def load_config(path: str, out_dir: Optional[str], seed: Optional[int]) -> ExperimentConfig:
    if not os.path.exists(path):
        raise ConfigParseError(f"config file not found: {path}")
    try:
        with open(path, "rb") as fh:
            data = tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise ConfigParseError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigParseError(f"{path}: top level must be a table")
    cfg_seed = data.get("seed")
    if cfg_seed is not None and (isinstance(cfg_seed, bool) or not isinstance(cfg_seed, int)):
        raise ConfigParseError("top-level 'seed' must be an integer")
    if seed is None:
        seed = cfg_seed
    base_dir = os.path.dirname(os.path.abspath(path))
    if out_dir is None:
        stem = os.path.splitext(os.path.basename(path))[0]
        out_dir = os.path.join(base_dir, f"{stem}-out")
    return ExperimentConfig(data=data, out_dir=out_dir, seed=seed, base_dir=base_dir)


def _print_report(report: Report) -> None:
    print(f"subcommand: {report.subcommand}   wall: {report.wall_time_s:.2f}s")
    for c in report.checks:
        verdict = "PASS" if c.passed else "FAIL"
        print(f"  [{verdict}] {c.name}: {c.value:.6g} {c.comparator} {c.tolerance:.6g}")
    print(f"artifacts: {', '.join(report.artifacts)}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = load_config(ns.config, ns.out, ns.seed)
    except ConfigParseError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    try:
        report = run(ns.subcommand, cfg)
    except CheckFailed as exc:
        report = getattr(exc, "report", None)
        if report is not None:
            _print_report(report)
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except ConfigParseError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except WarpspecError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # solver-level surprises map to the numeric exit
        print(f"error[internal]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    _print_report(report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
