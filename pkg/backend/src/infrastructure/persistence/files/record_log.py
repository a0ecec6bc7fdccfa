"""
Experiment log: cycle records and forecast launches per method.

Records go to JSON lines; their background and analysis states go to one
container each, in record order.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from src.domain.entities.cycle import CycleRecord, ForecastLaunch
from src.domain.entities.grid import GridSpec
from src.domain.exceptions import FormatError, MissingArtifactError
from src.domain.repositories.cycle_record_repository import ICycleRecordRepository
from src.domain.value_objects.da_method import DAMethod

from .container import atomic_write_bytes, read_states, write_states
from .layout import DatasetLayout

logger = logging.getLogger(__name__)


def write_jsonl(path: Path, rows: Sequence[dict[str, Any]]) -> None:
    text = "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)
    atomic_write_bytes(path, text.encode("utf-8"))


def read_jsonl(path: Path) -> list[dict[str, Any]]:
    if not path.is_file():
        raise MissingArtifactError("Missing experiment log", path=str(path))
    rows = []
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise FormatError(f"Invalid JSON on line {number} of {path}") from exc
    return rows


@dataclass(frozen=True)
class FileCycleRecordRepository(ICycleRecordRepository):
    layout: DatasetLayout

    def save_records(self, method: str, records: Sequence[CycleRecord]) -> None:
        write_jsonl(self.layout.records_path(method), [r.to_dict() for r in records])
        if records:
            write_states(self.layout.backgrounds_path(method), [r.background for r in records])
            write_states(self.layout.analyses_path(method), [r.analysis for r in records])
        logger.info(f"Wrote {len(records)} {method} records to {self.layout.records_path(method)}")

    def load_records(self, method: str, grid: GridSpec) -> list[CycleRecord]:
        rows = read_jsonl(self.layout.records_path(method))
        if not rows:
            return []
        backgrounds = read_states(self.layout.backgrounds_path(method), grid)
        analyses = read_states(self.layout.analyses_path(method), grid)
        if not len(rows) == len(backgrounds) == len(analyses):
            raise FormatError(f"Record log and state containers for {method} disagree in length")
        return [
            CycleRecord.from_dict(row, background, analysis)
            for row, background, analysis in zip(rows, backgrounds, analyses, strict=True)
        ]

    def save_launches(self, method: str, launches: Sequence[ForecastLaunch]) -> None:
        write_jsonl(self.layout.forecasts_path(method), [launch.to_dict() for launch in launches])
        for launch in launches:
            write_states(
                self.layout.forecast_states_path(method, launch.initial_time),
                launch.forecasts,
                leads=list(launch.leads),
            )
        logger.info(f"Wrote {len(launches)} {method} launches")

    def load_launches(self, method: str, grid: GridSpec) -> list[ForecastLaunch]:
        path = self.layout.forecasts_path(method)
        if not path.is_file():
            return []
        launches = []
        for row in read_jsonl(path):
            initial_time = int(row["initial_time"])
            forecasts = read_states(self.layout.forecast_states_path(method, initial_time), grid)
            launches.append(
                ForecastLaunch(
                    initial_time=initial_time,
                    leads=tuple(int(v) for v in row["leads"]),
                    forecasts=tuple(forecasts),
                    metrics={int(k): v for k, v in row.get("metrics", {}).items()},
                    method=DAMethod.from_string(row.get("method", method)),
                )
            )
        return launches

    def methods(self) -> list[str]:
        return self.layout.recorded_methods()
