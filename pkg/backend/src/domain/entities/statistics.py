"""
Normalization statistics and climatology entities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import FloatArray, StateField
from src.domain.exceptions import DegenerateStatisticsError, DimensionError


@dataclass(frozen=True)
class NormStats:
    """Per-variable scalar mean and population standard deviation."""

    means: dict[str, float] = field(default_factory=dict)
    stds: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if set(self.means) != set(self.stds):
            raise ValueError("NormStats means and stds must cover the same variables.")
        for name, std in self.stds.items():
            if not std > 0:
                raise DegenerateStatisticsError(
                    f"Standard deviation of variable {name!r} must be > 0, got {std}"
                )

    @classmethod
    def identity(cls, names: tuple[str, ...]) -> NormStats:
        return cls(means={n: 0.0 for n in names}, stds={n: 1.0 for n in names})

    def to_dict(self) -> dict[str, Any]:
        return {
            name: {"mean": self.means[name], "std": self.stds[name]}
            for name in self.means
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> NormStats:
        return cls(
            means={name: float(v["mean"]) for name, v in data.items()},
            stds={name: float(v["std"]) for name, v in data.items()},
        )


@dataclass(frozen=True, eq=False)
class Climatology:
    """Time-mean field of the truth, used as the anomaly reference."""

    grid: GridSpec
    values: FloatArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.shape != self.grid.shape:
            raise DimensionError(
                f"Climatology shape {values.shape} does not match grid {self.grid.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def as_state(self, time: int = 0) -> StateField:
        return StateField(grid=self.grid, values=self.values, time=time)
