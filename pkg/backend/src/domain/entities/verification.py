"""
Verification entities: metric series and summary tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from src.domain.entities.grid import LevelLabel


@dataclass(frozen=True)
class MetricSeries:
    """One metric of one slot against time (cycles) or lead (launches)."""

    metric: str
    variable: str
    level: LevelLabel
    points: tuple[tuple[int, float], ...] = ()

    @property
    def keys(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self.points)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(p[1] for p in self.points)

    def to_dict(self) -> dict[str, Any]:
        return {
            "metric": self.metric,
            "variable": self.variable,
            "level": self.level,
            "points": [list(p) for p in self.points],
        }


@dataclass(frozen=True)
class SummaryRow:
    variable: str
    level: LevelLabel
    label: str
    rmse: float
    acc: float | None = None


@dataclass(frozen=True)
class SummaryTable:
    """Time-mean RMSE and ACC per slot over the evaluation span."""

    name: str
    rows: tuple[SummaryRow, ...] = ()
    n_samples: int = 0

    def row(self, label: str) -> SummaryRow:
        for row in self.rows:
            if row.label == label:
                return row
        raise KeyError(f"No summary row for {label!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "n_samples": self.n_samples,
            "rows": [
                {
                    "variable": r.variable,
                    "level": r.level,
                    "label": r.label,
                    "rmse": r.rmse,
                    "acc": r.acc,
                }
                for r in self.rows
            ],
        }
