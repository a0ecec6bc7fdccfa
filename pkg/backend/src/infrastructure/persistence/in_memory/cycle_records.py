"""In-memory cycle record repository."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from threading import Lock

from src.domain.entities.cycle import CycleRecord, ForecastLaunch
from src.domain.entities.grid import GridSpec
from src.domain.exceptions import MissingArtifactError
from src.domain.repositories.cycle_record_repository import ICycleRecordRepository


@dataclass
class InMemoryCycleRecordRepository(ICycleRecordRepository):
    """Thread-safe in-memory storage for experiment products."""

    _records: dict[str, list[CycleRecord]] = field(default_factory=dict)
    _launches: dict[str, list[ForecastLaunch]] = field(default_factory=dict)
    _lock: Lock = field(default_factory=Lock)

    def save_records(self, method: str, records: Sequence[CycleRecord]) -> None:
        with self._lock:
            self._records[method] = list(records)

    def load_records(self, method: str, grid: GridSpec) -> list[CycleRecord]:
        with self._lock:
            if method not in self._records:
                raise MissingArtifactError("No records stored", path=f"memory:{method}")
            return [r for r in self._records[method] if r.background.grid == grid]

    def save_launches(self, method: str, launches: Sequence[ForecastLaunch]) -> None:
        with self._lock:
            self._launches[method] = list(launches)

    def load_launches(self, method: str, grid: GridSpec) -> list[ForecastLaunch]:
        with self._lock:
            return [
                launch
                for launch in self._launches.get(method, [])
                if launch.forecasts[0].grid == grid
            ]

    def methods(self) -> list[str]:
        with self._lock:
            return sorted(self._records)
