"""Repository interface for OSSE datasets."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import Any

import numpy as np
from numpy.typing import NDArray

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import StateField

SERIES_KINDS = ("truth", "background", "obs")


class IDatasetRepository(ABC):
    """Port for storing truth runs, observations, masks and their sidecars."""

    @abstractmethod
    def save_grid(self, grid: GridSpec) -> None:
        """Persist the grid description."""

    @abstractmethod
    def load_grid(self) -> GridSpec:
        """Fetch the grid description."""

    @abstractmethod
    def save_series(self, kind: str, split: str, states: Sequence[StateField]) -> None:
        """Persist a time series of one kind ("truth", "background", "obs") and split."""

    @abstractmethod
    def load_series(self, kind: str, split: str, grid: GridSpec) -> list[StateField]:
        """Fetch a time series in time order."""

    @abstractmethod
    def has_series(self, kind: str, split: str) -> bool:
        """Whether a series has been stored."""

    @abstractmethod
    def save_masks(
        self,
        observed_fraction: float,
        split: str,
        times: Sequence[int],
        masks: Sequence[NDArray[np.bool_]],
    ) -> None:
        """Persist grid-shaped observation masks for one mask ratio."""

    @abstractmethod
    def load_masks(
        self, observed_fraction: float, split: str
    ) -> tuple[list[int], list[NDArray[np.bool_]]]:
        """Fetch mask times and grid-shaped masks for one mask ratio."""

    @abstractmethod
    def save_field(self, name: str, state: StateField) -> None:
        """Persist a single field sidecar such as the climatology."""

    @abstractmethod
    def load_field(self, name: str, grid: GridSpec) -> StateField:
        """Fetch a single field sidecar."""

    @abstractmethod
    def save_document(self, name: str, data: dict[str, Any]) -> None:
        """Persist a JSON sidecar (norm stats, error table, manifest, ...)."""

    @abstractmethod
    def load_document(self, name: str) -> dict[str, Any]:
        """Fetch a JSON sidecar."""

    @abstractmethod
    def has_document(self, name: str) -> bool:
        """Whether a JSON sidecar exists."""
