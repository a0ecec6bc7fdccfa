"""EnsembleState entity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import FloatArray, StateField
from src.domain.exceptions import DimensionError, EnsembleSizeError


@dataclass(frozen=True, eq=False)
class EnsembleState:
    """N >= 2 member states sharing one grid and one time."""

    members: tuple[StateField, ...]

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if len(members) < 2:
            raise EnsembleSizeError(f"Ensemble needs at least 2 members, got {len(members)}")
        grid, time = members[0].grid, members[0].time
        for member in members[1:]:
            if member.grid != grid:
                raise DimensionError("Ensemble members must share one grid.")
            if member.time != time:
                raise DimensionError("Ensemble members must share one time.")
        object.__setattr__(self, "members", members)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def grid(self) -> GridSpec:
        return self.members[0].grid

    @property
    def time(self) -> int:
        return self.members[0].time

    def as_matrix(self) -> FloatArray:
        """m x N matrix with one flattened member per column."""
        return np.stack([m.values.ravel() for m in self.members], axis=1)

    @classmethod
    def from_matrix(cls, matrix: FloatArray, grid: GridSpec, time: int) -> EnsembleState:
        if matrix.ndim != 2 or matrix.shape[0] != grid.size:
            raise DimensionError(
                f"Ensemble matrix shape {matrix.shape} does not match grid size {grid.size}"
            )
        return cls(
            members=tuple(
                StateField(grid=grid, values=matrix[:, n].reshape(grid.shape), time=time)
                for n in range(matrix.shape[1])
            )
        )
