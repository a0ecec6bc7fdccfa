"""Build report use case: one comparison table over every recorded method."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from src.domain.exceptions import MissingArtifactError
from src.domain.repositories.cycle_record_repository import ICycleRecordRepository
from src.domain.repositories.dataset_repository import IDatasetRepository
from src.infrastructure.config.run_config import RunConfig
from src.infrastructure.persistence.files.container import atomic_write_bytes
from src.infrastructure.verification.scores import skill_horizon
from src.infrastructure.verification.summary import launch_series, summarize

from ._shared import eval_labels, layout_for, load_grid

logger = logging.getLogger(__name__)

_MISSING = "-"


def _cell(value: float | None, fmt: str = ".4g") -> str:
    return _MISSING if value is None else format(value, fmt)


@dataclass(frozen=True)
class BuildReportRequest:
    config: RunConfig


@dataclass(frozen=True)
class BuildReportResponse:
    text: str
    rows: list[dict[str, str]]


@dataclass
class BuildReportUseCase:
    repo: IDatasetRepository
    records: ICycleRecordRepository

    def execute(self, request: BuildReportRequest) -> BuildReportResponse:
        config = request.config
        layout = layout_for(config)
        grid = load_grid(self.repo, layout)
        labels = eval_labels(config, grid)
        methods = self.records.methods()
        if not methods:
            raise MissingArtifactError("No cycle records to report", path=str(layout.experiments_dir))

        columns = ["method", "cycles", "failed", "calls/cycle"]
        for label in labels:
            columns += [f"{label}_rmse", f"{label}_acc", f"{label}_horizon"]

        rows: list[dict[str, str]] = []
        for method in methods:
            records = self.records.load_records(method, grid)
            if not records:
                continue
            scored = [r for r in records if r.index >= config.cycle.spin_up_cycles] or records
            summary = summarize(scored, field_name="analysis", name=method)
            launches = self.records.load_launches(method, grid)
            row = {
                "method": method,
                "cycles": str(len(records)),
                "failed": str(sum(r.failed for r in records)),
                "calls/cycle": _cell(
                    sum(r.model_invocations for r in records) / len(records), ".3g"
                ),
            }
            for label in labels:
                slot = grid.slot_by_label(label)
                try:
                    summary_row = summary.row(label)
                    rmse, acc = summary_row.rmse, summary_row.acc
                except KeyError:
                    rmse, acc = None, None
                horizon = None
                if launches:
                    series = launch_series(launches, "acc", slot.variable, slot.level)
                    if series.points:
                        horizon = skill_horizon(series, config.eval.acc_threshold)
                row[f"{label}_rmse"] = _cell(rmse)
                row[f"{label}_acc"] = _cell(acc)
                row[f"{label}_horizon"] = _MISSING if horizon is None else f"{horizon}h"
            rows.append(row)

        widths = {c: max([len(c)] + [len(r[c]) for r in rows]) for c in columns}
        lines = [
            f"Run: {config.name} (config sha256 {config.sha256 or _MISSING})",
            "  ".join(c.ljust(widths[c]) for c in columns),
            "  ".join("-" * widths[c] for c in columns),
        ]
        lines += ["  ".join(r[c].ljust(widths[c]) for c in columns) for r in rows]
        text = "\n".join(line.rstrip() for line in lines) + "\n"
        atomic_write_bytes(layout.report_path, text.encode("utf-8"))
        logger.info(f"Report for {len(rows)} methods written to {layout.report_path}")
        return BuildReportResponse(text=text, rows=rows)
