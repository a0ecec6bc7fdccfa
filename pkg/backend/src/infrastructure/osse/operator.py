"""Point-sampling observation operator H and its adjoint."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from src.domain.entities.grid import GridSpec
from src.domain.entities.observations import ObsEntry, ObsErrorTable, SlotKey
from src.domain.entities.state import FloatArray, StateField
from src.domain.exceptions import DimensionError


@dataclass(frozen=True, eq=False)
class ObservationOperator:
    """H as a list of flat state indices in canonical order."""

    grid: GridSpec
    indices: NDArray[np.intp]
    slot_sizes: tuple[tuple[SlotKey, int], ...] = field(default=())

    @classmethod
    def from_masks(
        cls, grid: GridSpec, masks: Mapping[SlotKey, NDArray[np.bool_]]
    ) -> ObservationOperator:
        chunks: list[NDArray[np.intp]] = []
        sizes: list[tuple[SlotKey, int]] = []
        for slot in grid.slots():
            if slot.key not in masks:
                continue
            mask = np.asarray(masks[slot.key], dtype=bool)
            if mask.shape != (grid.n_lat, grid.n_lon):
                raise DimensionError(
                    f"Mask for {slot.label} has shape {mask.shape}, "
                    f"expected {(grid.n_lat, grid.n_lon)}"
                )
            offset = (slot.var_index * grid.n_level + slot.level_index) * grid.n_cells
            cells = np.flatnonzero(mask)
            chunks.append(offset + cells)
            sizes.append((slot.key, cells.size))
        indices = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.intp)
        return cls(grid=grid, indices=indices.astype(np.intp), slot_sizes=tuple(sizes))

    @classmethod
    def for_entry(cls, grid: GridSpec, entry: ObsEntry) -> ObservationOperator:
        return cls.from_masks(grid, entry.masks)

    @property
    def n_obs(self) -> int:
        return int(self.indices.size)

    def apply(self, x: FloatArray) -> FloatArray:
        return np.asarray(x).ravel()[self.indices]

    def adjoint(self, y: FloatArray) -> FloatArray:
        """Scatter observation-space values into a zero state vector."""
        out = np.zeros(self.grid.size)
        np.add.at(out, self.indices, y)
        return out

    def matrix(self) -> FloatArray:
        """Dense p x m selection matrix."""
        h = np.zeros((self.n_obs, self.grid.size))
        h[np.arange(self.n_obs), self.indices] = 1.0
        return h

    def sigma_vector(self, table: ObsErrorTable) -> FloatArray:
        parts = [
            np.full(size, table.sigmas[key] or 0.0, dtype=np.float64)
            for key, size in self.slot_sizes
        ]
        return np.concatenate(parts) if parts else np.zeros(0)


def observation_vector(grid: GridSpec, entry: ObsEntry) -> FloatArray:
    """Observed values concatenated in the operator's canonical order."""
    parts = [entry.values[slot.key] for slot in grid.slots() if slot.key in entry.values]
    return np.concatenate(parts).astype(np.float64) if parts else np.zeros(0)


def apply_obs_operator(
    state: StateField, masks: Mapping[SlotKey, NDArray[np.bool_]]
) -> FloatArray:
    """Values of `state` at observed cells, in canonical flatten order."""
    return ObservationOperator.from_masks(state.grid, masks).apply(state.values)
