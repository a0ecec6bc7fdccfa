"""CSV export of metric series and summary tables."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable
from pathlib import Path

from src.domain.entities.verification import MetricSeries, SummaryTable

from .container import atomic_write_bytes

CSV_COLUMNS = ("time_or_lead", "variable", "level", "metric", "value")
# Summary rows average over time, so their time_or_lead field stays empty.
SUMMARY_KEY = ""


def _number(value: float) -> str:
    return format(value, ".17g")


def _rows(items: Iterable[MetricSeries | SummaryTable]) -> list[tuple[str, ...]]:
    timed: list[tuple[int, tuple[str, ...]]] = []
    summary: list[tuple[str, ...]] = []
    for item in items:
        if isinstance(item, MetricSeries):
            for key, value in item.points:
                timed.append(
                    (key, (str(key), item.variable, str(item.level), item.metric, _number(value)))
                )
            continue
        for row in item.rows:
            summary.append((SUMMARY_KEY, row.variable, str(row.level), "rmse", _number(row.rmse)))
            if row.acc is not None:
                summary.append((SUMMARY_KEY, row.variable, str(row.level), "acc", _number(row.acc)))
    timed.sort(key=lambda pair: pair[0])
    return [row for _, row in timed] + summary


def export_csv(items: MetricSeries | SummaryTable | Iterable[MetricSeries | SummaryTable], path: str | Path) -> None:
    """Header plus one row per value, ordered by time (or lead) and then item order."""
    if isinstance(items, (MetricSeries, SummaryTable)):
        items = [items]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(_rows(items))
    atomic_write_bytes(Path(path), buffer.getvalue().encode("utf-8"))
