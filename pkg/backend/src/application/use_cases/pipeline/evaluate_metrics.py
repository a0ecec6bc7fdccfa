"""Evaluate metrics use case: per-method CSV exports."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from src.domain.entities.verification import MetricSeries, SummaryTable
from src.domain.exceptions import MissingArtifactError
from src.domain.repositories.cycle_record_repository import ICycleRecordRepository
from src.domain.repositories.dataset_repository import IDatasetRepository
from src.infrastructure.config.run_config import RunConfig
from src.infrastructure.persistence.files.csv_export import export_csv
from src.infrastructure.verification.summary import launch_series, metric_series, summarize

from ._shared import eval_labels, layout_for, load_grid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvaluateMetricsRequest:
    config: RunConfig


@dataclass(frozen=True)
class EvaluateMetricsResponse:
    summaries: dict[str, SummaryTable]
    written: list[Path] = field(default_factory=list)


@dataclass
class EvaluateMetricsUseCase:
    repo: IDatasetRepository
    records: ICycleRecordRepository

    def execute(self, request: EvaluateMetricsRequest) -> EvaluateMetricsResponse:
        config = request.config
        layout = layout_for(config)
        grid = load_grid(self.repo, layout)
        labels = eval_labels(config, grid)
        methods = self.records.methods()
        if not methods:
            raise MissingArtifactError("No cycle records to evaluate", path=str(layout.experiments_dir))

        summaries: dict[str, SummaryTable] = {}
        written: list[Path] = []
        for method in methods:
            records = self.records.load_records(method, grid)
            if not records:
                continue
            slots = [grid.slot_by_label(label) for label in labels]

            for field_name in ("analysis", "background"):
                series: list[MetricSeries] = []
                for slot in slots:
                    for metric in ("rmse", "acc"):
                        series.append(
                            metric_series(records, field_name, metric, slot.variable, slot.level)
                        )
                path = layout.metrics_path(f"{method}_{field_name}")
                export_csv(series, path)
                written.append(path)

            summary = summarize(
                records,
                field_name="analysis",
                spin_up_cycles=config.cycle.spin_up_cycles,
                name=method,
            )
            summaries[method] = summary
            path = layout.metrics_path(f"{method}_summary")
            export_csv(summary, path)
            written.append(path)

            launches = self.records.load_launches(method, grid)
            if launches:
                lead_series = [
                    launch_series(launches, metric, slot.variable, slot.level)
                    for slot in slots
                    for metric in ("rmse", "acc")
                ]
                path = layout.metrics_path(f"{method}_forecasts")
                export_csv(lead_series, path)
                written.append(path)
        logger.info(f"Exported {len(written)} metric files for {len(summaries)} methods")
        return EvaluateMetricsResponse(summaries=summaries, written=written)
