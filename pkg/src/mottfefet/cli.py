"""`mott-sim` command line entry point.

    mott-sim run   [--config PATH] [--experiment NAME] [--seed N]
                   [--out DIR] [section.key=value ...]
    mott-sim check [--config PATH] [section.key=value ...]

Exit codes: 0 success, 2 configuration error, 3 simulation
non-convergence, 4 failed acceptance check.
"""

from __future__ import annotations

import argparse
import sys

from .acceptance import check as run_check
from .config import EXPERIMENTS, ConfigError, load_config
from .experiments import run_experiment
from .network import ConvergenceError

EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3
EXIT_CHECK_FAILED = 4


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mott-sim",
        description="Ferroelectric-gated Mott-channel memory simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one experiment")
    run_p.add_argument("--config", help="TOML configuration file")
    run_p.add_argument("--experiment", choices=EXPERIMENTS,
                       help="experiment to run (overrides config)")
    run_p.add_argument("--seed", type=int, help="master seed (overrides config)")
    run_p.add_argument("--out", help="output directory (overrides config)")
    run_p.add_argument("overrides", nargs="*", metavar="section.key=value",
                       help="additional configuration overrides")

    check_p = sub.add_parser("check", help="run the acceptance suite")
    check_p.add_argument("--config", help="TOML configuration file")
    check_p.add_argument("overrides", nargs="*", metavar="section.key=value",
                         help="additional configuration overrides")
    return parser


def _resolve(args) -> dict:
    overrides = list(args.overrides)
    if getattr(args, "experiment", None):
        overrides.append(f"run.experiment={args.experiment}")
    if getattr(args, "seed", None) is not None:
        overrides.append(f"run.seed={args.seed}")
    if getattr(args, "out", None):
        overrides.append(f"run.out_dir={args.out}")
    return load_config(args.config, overrides)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _resolve(args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "run":
        try:
            out = run_experiment(cfg)
        except ConvergenceError as exc:
            print(f"error: non-convergence: {exc}", file=sys.stderr)
            return EXIT_NONCONVERGENCE
        print(f"wrote {out}/manifest.json")
        return 0

    ok = run_check(cfg)
    if not ok:
        print("acceptance check FAILED", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print("acceptance check passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
