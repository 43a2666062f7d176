"""Command-line entrypoint: `varsmooth spca|ssc|selftest`."""

import argparse
import sys
from typing import List, Optional

from varsmooth.bench.runner import run_spca, run_ssc
from varsmooth.bench.selftest import SUITES, run_selftest
from varsmooth.core.config import get_settings
from varsmooth.core.errors import InvalidArgumentError, VarSmoothError
from varsmooth.core.logger import get_logger, setup_logging
from varsmooth.schemas.run_schema import Experiment, RunConfig, load_run_config

# Setup logging first
setup_logging()
logger = get_logger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_ERROR = 2


def _seed_list(text: str) -> List[int]:
    """Parse '0,1,2' or '0-9' into a list of seeds."""
    seeds: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise argparse.ArgumentTypeError("at least one seed is required")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varsmooth", description="Variable smoothing benchmarks on the Stiefel manifold")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in [("spca", "sparse PCA benchmark"), ("ssc", "sparse spectral clustering benchmark")]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="JSON experiment config")
        cmd.add_argument("--out", help="output directory")
        cmd.add_argument("--seeds", type=_seed_list, help="seed list, e.g. 0,1,2 or 0-9")
        cmd.add_argument("--workers", type=int, help="parallel workers")
        cmd.add_argument("--time-budget", type=float, dest="time_budget", help="per-run wall-clock budget in seconds")
        if name == "ssc":
            cmd.add_argument("--dataset", help="dataset CSV (overrides the config)")

    selftest = sub.add_parser("selftest", help="run the property suites")
    selftest.add_argument("--suite", action="append", choices=sorted(SUITES), help="restrict to a suite (repeatable)")
    selftest.add_argument("--seed", type=int, default=0)
    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    config = load_run_config(args.config)
    return config.with_overrides(
        output_dir=args.out,
        seeds=args.seeds,
        workers=args.workers,
        time_budget=args.time_budget,
        dataset=getattr(args, "dataset", None),
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit status."""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    logger.info("Starting varsmooth", version=settings.app_version, command=args.command)

    try:
        if args.command == "selftest":
            report = run_selftest(args.suite, seed=args.seed)
            for suite in report.suites:
                status = "PASS" if suite.passed else "FAIL"
                line = f"{status} {suite.name:<22} {suite.checks:>6} checks {suite.seconds:8.3f}s"
                print(line if suite.passed else f"{line}  {suite.error}")
            return EXIT_OK if report.passed else EXIT_ERROR

        config = _resolve(args)
        expected = Experiment(args.command)
        if config.experiment != expected:
            raise InvalidArgumentError("experiment", config.experiment.value, f"'{expected.value}' for the {args.command} command")
        out = run_spca(config) if expected == Experiment.SPCA else run_ssc(config)
        print(out)
        return EXIT_OK
    except VarSmoothError as e:
        logger.error("varsmooth error", error=e.message, details=e.details)
        return EXIT_ERROR
    except Exception as e:
        logger.error("Unexpected error", error=str(e), exc_info=True)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
