"""
Time-mean summaries and metric series over cycle records and launches.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from src.domain.entities.cycle import CycleRecord, ForecastLaunch
from src.domain.entities.grid import GridSpec, LevelLabel
from src.domain.entities.verification import MetricSeries, SummaryRow, SummaryTable


@dataclass
class SummaryAccumulator:
    """Running sums of per-sample scores, one bucket per slot label."""

    grid: GridSpec
    _sums: dict[str, dict[str, float]] = field(default_factory=dict)
    _counts: dict[str, dict[str, int]] = field(default_factory=dict)
    n_samples: int = 0

    def add(self, scores: dict[str, dict[str, float]]) -> None:
        self.n_samples += 1
        for label, metrics in scores.items():
            sums = self._sums.setdefault(label, {})
            counts = self._counts.setdefault(label, {})
            for metric, value in metrics.items():
                sums[metric] = sums.get(metric, 0.0) + float(value)
                counts[metric] = counts.get(metric, 0) + 1

    def mean(self, label: str, metric: str) -> float | None:
        count = self._counts.get(label, {}).get(metric, 0)
        if not count:
            return None
        return self._sums[label][metric] / count

    def table(self, name: str) -> SummaryTable:
        rows = []
        for slot in self.grid.slots():
            rmse = self.mean(slot.label, "rmse")
            if rmse is None:
                continue
            rows.append(
                SummaryRow(
                    variable=slot.variable,
                    level=slot.level,
                    label=slot.label,
                    rmse=rmse,
                    acc=self.mean(slot.label, "acc"),
                )
            )
        return SummaryTable(name=name, rows=tuple(rows), n_samples=self.n_samples)


def summarize(
    items: Sequence[CycleRecord] | Sequence[ForecastLaunch],
    *,
    field_name: str = "analysis",
    spin_up_cycles: int = 0,
    lead: int | None = None,
    name: str = "summary",
) -> SummaryTable:
    """Time means of per-record scores.

    Cycle records with index < spin_up_cycles are skipped; launches are
    summarized at `lead`.
    """
    if not items:
        raise ValueError("Nothing to summarize.")
    first = items[0]
    grid = first.background.grid if isinstance(first, CycleRecord) else first.forecasts[0].grid
    accumulator = SummaryAccumulator(grid=grid)
    for item in items:
        if isinstance(item, CycleRecord):
            if item.index < spin_up_cycles:
                continue
            accumulator.add(item.metrics.get(field_name, {}))
        else:
            if lead is None:
                raise ValueError("Summarizing forecast launches needs a lead.")
            accumulator.add(item.metrics.get(lead, {}))
    return accumulator.table(name)


def _label(grid: GridSpec, variable: str, level: LevelLabel | None) -> str:
    return grid.slot(variable, level).label


def metric_series(
    records: Iterable[CycleRecord],
    field_name: str,
    metric: str,
    variable: str,
    level: LevelLabel | None = None,
) -> MetricSeries:
    """Per-cycle scores keyed by window start time."""
    points = []
    resolved_level: LevelLabel | None = level
    for record in records:
        slot = record.background.grid.slot(variable, level)
        resolved_level = slot.level
        value = record.score(field_name, slot.label, metric)
        if value is not None:
            points.append((record.window_start, value))
    return MetricSeries(
        metric=metric,
        variable=variable,
        level=resolved_level if resolved_level is not None else "",
        points=tuple(points),
    )


def launch_series(
    launches: Sequence[ForecastLaunch],
    metric: str,
    variable: str,
    level: LevelLabel | None = None,
) -> MetricSeries:
    """Scores against lead, averaged over launches."""
    if not launches:
        return MetricSeries(metric=metric, variable=variable, level=level or "")
    grid = launches[0].forecasts[0].grid
    label = _label(grid, variable, level)
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for launch in launches:
        for lead in launch.leads:
            value = launch.score(lead, label, metric)
            if value is None:
                continue
            sums[lead] = sums.get(lead, 0.0) + value
            counts[lead] = counts.get(lead, 0) + 1
    points = tuple((lead, sums[lead] / counts[lead]) for lead in sorted(sums))
    return MetricSeries(
        metric=metric,
        variable=variable,
        level=grid.slot(variable, level).level,
        points=points,
    )
