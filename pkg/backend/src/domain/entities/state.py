"""
StateField entity.

Holds x, x^b, x^a or x^t: a gridded multi-variable state at one time stamp.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.domain.entities.grid import GridSpec, LevelLabel
from src.domain.exceptions import DimensionError

FloatArray = NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class StateField:
    """Values indexed [variable][level][lat][lon] at a time in model hours.

    The values array is copied to float64 and made read-only on construction.
    """

    grid: GridSpec
    values: FloatArray
    time: int = 0

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.shape != self.grid.shape:
            raise DimensionError(
                f"State shape {values.shape} does not match grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DimensionError("State values must be finite.")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "time", int(self.time))

    @classmethod
    def zeros(cls, grid: GridSpec, time: int = 0) -> StateField:
        return cls(grid=grid, values=np.zeros(grid.shape), time=time)

    def slot_values(self, variable: str, level: LevelLabel | None = None) -> FloatArray:
        """lat x lon view of one active slot."""
        slot = self.grid.slot(variable, level)
        return self.values[slot.var_index, slot.level_index]

    def with_values(self, values: FloatArray, time: int | None = None) -> StateField:
        return StateField(
            grid=self.grid,
            values=values,
            time=self.time if time is None else time,
        )

    def at_time(self, time: int) -> StateField:
        return StateField(grid=self.grid, values=self.values, time=time)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateField):
            return NotImplemented
        return (
            self.time == other.time
            and self.grid == other.grid
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]
