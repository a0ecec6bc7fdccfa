"""
Unit tests for summaries and metric series.
"""

import pytest

from src.domain.entities.cycle import CycleRecord, ForecastLaunch
from src.domain.entities.state import StateField
from src.domain.value_objects import DAMethod
from src.infrastructure.verification import (
    SummaryAccumulator,
    launch_series,
    metric_series,
    summarize,
)


def _record(grid, index, rmse, acc=None):
    state = StateField.zeros(grid, time=12 * index)
    scores = {"rmse": rmse} if acc is None else {"rmse": rmse, "acc": acc}
    return CycleRecord(
        index=index,
        window_start=12 * index,
        method=DAMethod.THREEDVAR,
        background=state,
        analysis=state,
        metrics={"analysis": {"x": scores}, "background": {"x": {"rmse": 2 * rmse}}},
    )


def _launch(grid, time, acc_by_lead):
    leads = tuple(acc_by_lead)
    return ForecastLaunch(
        initial_time=time,
        leads=leads,
        forecasts=tuple(StateField.zeros(grid, time + lead) for lead in leads),
        metrics={lead: {"x": {"acc": acc, "rmse": 1.0 - acc}} for lead, acc in acc_by_lead.items()},
    )


class TestSummarize:
    """Tests for summarize."""

    def test_spin_up_cycles_are_skipped(self, ring_grid):
        records = [_record(ring_grid, i, float(i)) for i in range(5)]
        table = summarize(records, spin_up_cycles=2)
        assert table.n_samples == 3
        assert table.row("x").rmse == pytest.approx(3.0)
        assert table.row("x").acc is None

    def test_background_field(self, ring_grid):
        records = [_record(ring_grid, i, 1.0, acc=0.5) for i in range(3)]
        table = summarize(records, field_name="background", name="bg")
        assert table.name == "bg"
        assert table.row("x").rmse == pytest.approx(2.0)

    def test_launches_need_a_lead(self, ring_grid):
        launches = [_launch(ring_grid, 0, {0: 1.0, 24: 0.8})]
        with pytest.raises(ValueError, match="lead"):
            summarize(launches)
        assert summarize(launches, lead=24).row("x").acc == pytest.approx(0.8)

    def test_empty_input(self):
        with pytest.raises(ValueError):
            summarize([])


def test_streaming_matches_batch_means(ring_grid):
    values = [0.3, 1.7, 2.2, 0.9]
    accumulator = SummaryAccumulator(grid=ring_grid)
    for value in values:
        accumulator.add({"x": {"rmse": value}})
    assert accumulator.mean("x", "rmse") == pytest.approx(sum(values) / len(values), rel=1e-12)
    assert accumulator.mean("x", "acc") is None
    assert accumulator.table("t").n_samples == 4


def test_metric_series_keyed_by_window_start(ring_grid):
    records = [_record(ring_grid, i, 0.1 * i, acc=0.9) for i in range(3)]
    series = metric_series(records, "analysis", "rmse", "x")
    assert series.keys == (0, 12, 24)
    assert series.values == pytest.approx((0.0, 0.1, 0.2))
    assert series.level == "surface"
    assert metric_series(records, "background", "acc", "x").points == ()


def test_launch_series_averages_over_launches(ring_grid):
    launches = [
        _launch(ring_grid, 0, {0: 1.0, 24: 0.8}),
        _launch(ring_grid, 336, {0: 1.0, 24: 0.6, 48: 0.4}),
    ]
    series = launch_series(launches, "acc", "x")
    assert series.keys == (0, 24, 48)
    assert series.values == pytest.approx((1.0, 0.7, 0.4))


def test_launch_series_without_launches():
    assert launch_series([], "acc", "z", 500).points == ()
