"""Launch medium-range forecasts use case."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from src.domain.entities.cycle import ForecastLaunch
from src.domain.exceptions import MissingArtifactError
from src.domain.repositories.cycle_record_repository import ICycleRecordRepository
from src.domain.repositories.dataset_repository import IDatasetRepository
from src.domain.value_objects.da_method import DAMethod
from src.application.cycling.runner import launch_medium_range, schedule_launches
from src.infrastructure.config.run_config import RunConfig

from ._shared import layout_for, load_climatology, load_grid, require_series

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LaunchForecastsRequest:
    config: RunConfig
    method: DAMethod | None = None


@dataclass(frozen=True)
class LaunchForecastsResponse:
    method: DAMethod
    launches: list[ForecastLaunch]


@dataclass
class LaunchForecastsUseCase:
    repo: IDatasetRepository
    records: ICycleRecordRepository

    def execute(self, request: LaunchForecastsRequest) -> LaunchForecastsResponse:
        config = request.config
        method = request.method or config.da.method
        layout = layout_for(config)
        grid = load_grid(self.repo, layout)
        records = self.records.load_records(method.value, grid)
        if not records:
            raise MissingArtifactError(
                f"No {method.value} cycle records; run the cycle step first",
                path=str(layout.records_path(method.value)),
            )
        truth = require_series(self.repo, layout, "truth", config.cycle.split, grid)
        climatology = load_climatology(self.repo, layout, grid)
        model = config.model.build_forecast()

        starts = schedule_launches(
            records,
            interval=config.eval.launch_interval_hours,
            spin_up_cycles=config.cycle.spin_up_cycles,
        )
        launches = [
            launch_medium_range(
                model,
                record.analysis,
                truth,
                leads=config.eval.leads,
                climatology=climatology,
                method=method,
            )
            for record in starts
        ]
        self.records.save_launches(method.value, launches)
        logger.info(f"Launched {len(launches)} {method.value} forecasts")
        return LaunchForecastsResponse(method=method, launches=launches)
