"""Repository interface for cycle records and forecast launches."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence

from src.domain.entities.cycle import CycleRecord, ForecastLaunch
from src.domain.entities.grid import GridSpec


class ICycleRecordRepository(ABC):
    """Port for experiment products, grouped by method tag."""

    @abstractmethod
    def save_records(self, method: str, records: Sequence[CycleRecord]) -> None:
        """Replace the records of one method."""

    @abstractmethod
    def load_records(self, method: str, grid: GridSpec) -> list[CycleRecord]:
        """Fetch the records of one method in cycle order.

        Raises:
            MissingArtifactError: The method has no stored records.
        """

    @abstractmethod
    def save_launches(self, method: str, launches: Sequence[ForecastLaunch]) -> None:
        """Replace the forecast launches of one method."""

    @abstractmethod
    def load_launches(self, method: str, grid: GridSpec) -> list[ForecastLaunch]:
        """Fetch the forecast launches of one method in launch order; empty if none."""

    @abstractmethod
    def methods(self) -> list[str]:
        """Method tags with stored records."""
