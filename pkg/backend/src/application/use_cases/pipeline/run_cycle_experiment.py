"""Run cycling experiment use case."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from src.domain.entities.cycle import CycleConfig, CycleRecord
from src.domain.entities.state import StateField
from src.domain.exceptions import AlignmentError
from src.domain.repositories.cycle_record_repository import ICycleRecordRepository
from src.domain.repositories.dataset_repository import IDatasetRepository
from src.domain.value_objects.da_method import DAMethod
from src.application.cycling.runner import INITIAL_LEAD, run_cycle
from src.infrastructure.assimilation.covariances import ObsCov
from src.infrastructure.assimilation.strategies import AnalysisContext, build_strategy
from src.infrastructure.config.run_config import RunConfig

from ._shared import (
    layout_for,
    load_background_cov,
    load_climatology,
    load_error_table,
    load_grid,
    load_norm_stats,
    load_obs_set,
    load_regressor,
    require_series,
)
from .train_regressor import TrainRegressorRequest, TrainRegressorUseCase

logger = logging.getLogger(__name__)


def plan_cycles(config: RunConfig, truth: list[StateField]) -> tuple[int, int]:
    """First window start and cycle count that fit the truth split.

    The first window starts at the earliest window multiple at least 24 h
    after the split begins; n_cycles = 0 takes every window the split holds.

    Raises:
        AlignmentError: The split is too short for a single cycle.
    """
    window = config.cycle.window_hours
    first, last = truth[0].time, truth[-1].time
    start = math.ceil((first + INITIAL_LEAD) / window) * window
    available = (last + config.osse.cadence_hours - start) // window
    if available < 1:
        raise AlignmentError(
            f"Split spanning {first}..{last} h is too short for a {window} h window"
        )
    requested = config.cycle.n_cycles or available
    if requested > available:
        logger.warning(f"Only {available} of {requested} requested cycles fit the split")
    return start, min(requested, available)


def cycle_config_for(
    config: RunConfig, method: DAMethod, start: int, n_cycles: int
) -> CycleConfig:
    return CycleConfig(
        window_hours=config.cycle.window_hours,
        obs_cadence_hours=config.osse.cadence_hours,
        n_cycles=n_cycles,
        method=method,
        htaa=config.cycle.htaa,
        spin_up_cycles=config.cycle.spin_up_cycles,
        start_time=start,
        initial_perturbation=config.cycle.initial_perturbation,
        seed=config.seed,
    )


@dataclass(frozen=True)
class RunCycleExperimentRequest:
    config: RunConfig
    method: DAMethod | None = None


@dataclass(frozen=True)
class RunCycleExperimentResponse:
    method: DAMethod
    records: list[CycleRecord]

    @property
    def n_failed(self) -> int:
        return sum(r.failed for r in self.records)


@dataclass
class RunCycleExperimentUseCase:
    repo: IDatasetRepository
    records: ICycleRecordRepository

    def execute(self, request: RunCycleExperimentRequest) -> RunCycleExperimentResponse:
        config = request.config
        method = request.method or config.da.method
        layout = layout_for(config)
        grid = load_grid(self.repo, layout)
        table = load_error_table(self.repo, layout)
        split = config.cycle.split

        truth = require_series(self.repo, layout, "truth", split, grid)
        obs = load_obs_set(self.repo, layout, config, split, config.cycle.mask_ratio, grid, table)
        start, n_cycles = plan_cycles(config, truth)

        regressor = None
        if method is DAMethod.REGRESSOR:
            regressor = load_regressor(self.repo, layout)
            if regressor is None:
                regressor = (
                    TrainRegressorUseCase(repo=self.repo)
                    .execute(TrainRegressorRequest(config=config))
                    .regressor
                )

        model = config.model.build_forecast()
        context = AnalysisContext(
            model=model,
            b=load_background_cov(self.repo, layout, grid),
            r=ObsCov(table),
            solver=config.da.solver,
            ensemble_size=config.da.enkf.members,
            inflation=config.da.enkf.inflation,
            localization=config.da.enkf.localization,
            hybrid_beta=config.da.hybrid_beta,
            regressor=regressor,
            norm_stats=load_norm_stats(self.repo, layout),
            seed=config.seed,
        )
        cycle_config = cycle_config_for(config, method, start, n_cycles)
        records = run_cycle(
            model,
            truth,
            obs,
            cycle_config,
            build_strategy(method, context),
            load_climatology(self.repo, layout, grid),
        )
        self.records.save_records(method.value, records)
        return RunCycleExperimentResponse(method=method, records=records)
