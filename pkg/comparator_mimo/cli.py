"""
Command-line entry point.

    comparator-mimo simulate <scenario-file|preset> [--snr a:b:step] [--seed N]
        [--threads N] [--out file.csv] [--paper-scale] [--verbose]
    comparator-mimo presets

Exit codes: 0 on success, 2 for parse/configuration/input errors, 3 when a
sweep skipped too many trials.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from comparator_mimo.config import DEFAULT_THREADS, LOG_LEVEL, RESULTS_FOLDER
from comparator_mimo.domain.scenario import Scenario
from comparator_mimo.exceptions import (
    ConfigurationError,
    InvalidInputError,
    ScenarioParseError,
    SweepFailure,
)
from comparator_mimo.harness import emit_csv, list_presets, load_preset, load_scenario, run_sweep
from comparator_mimo.harness.scenario_io import parse_grid

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SWEEP = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comparator-mimo",
        description="Monte Carlo sweeps of comparator-network 1-bit MIMO receivers",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Run a scenario and write CSV")
    simulate.add_argument("scenario", help="Scenario file or preset name")
    simulate.add_argument("--snr", help="SNR grid override, start:stop:step or a,b,c")
    simulate.add_argument("--seed", type=int, help="Master seed override")
    simulate.add_argument(
        "--threads", type=int, default=DEFAULT_THREADS, help="Worker threads"
    )
    simulate.add_argument("--out", help="CSV file (default: stdout)")
    simulate.add_argument(
        "--paper-scale",
        "--published-scale",
        dest="published_scale",
        action="store_true",
        help="Use the published trial counts",
    )
    simulate.add_argument("--verbose", action="store_true", help="Debug logging")

    commands.add_parser("presets", help="List preset scenarios")
    return parser


def configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else LOG_LEVEL)


def resolve_scenario(reference: str) -> Scenario:
    """A path to a scenario file, or else the name of a preset."""
    path = Path(reference)
    if path.is_file():
        return load_scenario(path)
    return load_preset(reference)


def apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    if args.published_scale:
        scenario = scenario.at_published_scale()
    updates = {}
    if args.snr:
        try:
            updates["snr_grid_db"] = parse_grid(args.snr)
        except ValueError as e:
            raise InvalidInputError(f"--snr: {e}") from e
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if not updates:
        return scenario
    return Scenario.model_validate({**scenario.model_dump(), **updates})


def output_path(out: str) -> Path:
    """Bare file names go to the results folder."""
    path = Path(out)
    if not path.is_absolute() and path.parent == Path("."):
        return Path(RESULTS_FOLDER) / path
    return path


def simulate(args: argparse.Namespace) -> int:
    scenario = apply_overrides(resolve_scenario(args.scenario), args)
    logger.info(
        f"Running '{scenario.name}' ({scenario.metric.value}): "
        f"{len(scenario.snr_grid_db)} SNR points, {scenario.n_channels} channels, "
        f"seed {scenario.master_seed}, {args.threads} thread(s)"
    )
    report = run_sweep(scenario, threads=args.threads)
    if args.out:
        target = output_path(args.out)
        emit_csv(report, target)
        logger.success(f"Wrote {len(report.rows)} rows to {target}")
    else:
        emit_csv(report, sys.stdout)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(getattr(args, "verbose", False))

    if args.command == "presets":
        for name in list_presets():
            print(name)
        return EXIT_OK

    try:
        return simulate(args)
    except (ScenarioParseError, ConfigurationError, InvalidInputError) as e:
        logger.error(str(e))
        return EXIT_INPUT
    except SweepFailure as e:
        logger.error(str(e))
        return EXIT_SWEEP


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
