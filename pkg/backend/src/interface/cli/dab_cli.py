"""
Desk-scale assimilation benchmark CLI.

Every subcommand reads one run configuration and writes under its output
root; `report` prints the comparison table to stdout.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

# Add backend to sys.path to allow running this script directly
backend_root = Path(__file__).parent.parent.parent.parent
if str(backend_root) not in sys.path:
    sys.path.append(str(backend_root))

from src.application.use_cases.pipeline import (  # noqa: E402
    BuildReportRequest,
    BuildReportUseCase,
    EvaluateMetricsRequest,
    EvaluateMetricsUseCase,
    GenerateObservationsRequest,
    GenerateObservationsUseCase,
    GenerateTruthRequest,
    GenerateTruthUseCase,
    LaunchForecastsRequest,
    LaunchForecastsUseCase,
    RunCycleExperimentRequest,
    RunCycleExperimentUseCase,
    TrainRegressorRequest,
    TrainRegressorUseCase,
)
from src.domain.exceptions import DabError  # noqa: E402
from src.domain.value_objects.da_method import DAMethod  # noqa: E402
from src.infrastructure.config import ConfigError, RunConfig, RunConfigLoader  # noqa: E402
from src.infrastructure.persistence.files import (  # noqa: E402
    DatasetLayout,
    FileCycleRecordRepository,
    FileDatasetRepository,
)
from src.presentation.metrics import observe_cycles, write_textfile  # noqa: E402

logger = logging.getLogger("dab")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _method(value: str) -> DAMethod:
    try:
        return DAMethod.from_string(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dab", description="Desk-scale DA/OSSE benchmark")
    parser.add_argument("--log-level", default="INFO", help="Root log level (default INFO)")
    parser.add_argument("--metrics-textfile", type=Path, help="Write Prometheus counters here")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", required=True, type=Path, help="Run configuration YAML")
        sub.add_argument("--seed", type=int, help="Override every seed of the run")
        return sub

    command("truth", "Generate and store the truth run")
    command("obs", "Generate noisy observations, masks and training backgrounds")
    command("train", "Fit the increment regressor on the train split")
    cycle = command("cycle", "Run the cycling experiment")
    cycle.add_argument("--method", type=_method, help="Override da.method")
    forecast = command("forecast", "Launch medium-range forecasts from stored analyses")
    forecast.add_argument(
        "--from", dest="from_method", type=_method, help="Method whose analyses seed launches"
    )
    command("eval", "Export metric CSVs")
    command("report", "Print and store the method comparison table")
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfigLoader().load(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    return config


def run(args: argparse.Namespace) -> None:
    config = _load_config(args)
    layout = DatasetLayout(root=config.output.root, shard_hours=config.output.shard_hours)
    repo = FileDatasetRepository(layout=layout)
    records = FileCycleRecordRepository(layout=layout)

    if args.command == "truth":
        truth = GenerateTruthUseCase(repo=repo).execute(GenerateTruthRequest(config=config))
        logger.info(f"Truth: {truth.n_states} states, splits {truth.split_sizes}")

    elif args.command == "obs":
        obs = GenerateObservationsUseCase(repo=repo).execute(
            GenerateObservationsRequest(config=config)
        )
        logger.info(f"Observations: {obs.n_obs_times} times per split")

    elif args.command == "train":
        trained = TrainRegressorUseCase(repo=repo).execute(TrainRegressorRequest(config=config))
        logger.info(f"Regressor fitted on {trained.n_samples} samples")

    elif args.command == "cycle":
        response = RunCycleExperimentUseCase(repo=repo, records=records).execute(
            RunCycleExperimentRequest(config=config, method=args.method)
        )
        observe_cycles(response.records)
        logger.info(
            f"{response.method.value}: {len(response.records)} cycles, "
            f"{response.n_failed} failed"
        )

    elif args.command == "forecast":
        launched = LaunchForecastsUseCase(repo=repo, records=records).execute(
            LaunchForecastsRequest(config=config, method=args.from_method)
        )
        logger.info(f"{launched.method.value}: {len(launched.launches)} launches")

    elif args.command == "eval":
        evaluated = EvaluateMetricsUseCase(repo=repo, records=records).execute(
            EvaluateMetricsRequest(config=config)
        )
        for path in evaluated.written:
            logger.info(f"Wrote {path}")

    elif args.command == "report":
        report = BuildReportUseCase(repo=repo, records=records).execute(
            BuildReportRequest(config=config)
        )
        sys.stdout.write(report.text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(), format=LOG_FORMAT, stream=sys.stderr, force=True
    )
    try:
        run(args)
    except (DabError, ConfigError) as exc:
        logger.error(str(exc))
        return 1
    finally:
        if args.metrics_textfile is not None:
            write_textfile(args.metrics_textfile)
    return 0


if __name__ == "__main__":
    sys.exit(main())
