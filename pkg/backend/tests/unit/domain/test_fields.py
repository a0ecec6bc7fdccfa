"""
Unit tests for field services: weighting, flattening, normalization, climatology.
"""

import numpy as np
import pytest

from src.domain.entities.state import StateField
from src.domain.entities.statistics import NormStats
from src.domain.exceptions import DegenerateStatisticsError, DimensionError, MissingStatsError
from src.domain.services.fields import (
    compute_climatology,
    compute_norm_stats,
    denormalize,
    flatten,
    latitude_weights,
    normalize,
    unflatten,
)


def test_latitude_weights_average_to_one(latlon_grid):
    weights = latitude_weights(latlon_grid)
    assert weights.mean() == pytest.approx(1.0)
    assert weights[0] == pytest.approx(weights[-1])
    assert weights[1] > weights[0]


def test_ring_weights_are_uniform(ring_grid):
    np.testing.assert_allclose(latitude_weights(ring_grid), [1.0])


def test_flatten_unflatten_is_identity(latlon_grid, random_state):
    state = random_state(latlon_grid, time=12)
    vector = flatten(state)
    assert vector.shape == (latlon_grid.size,)
    assert unflatten(vector, latlon_grid, time=12) == state


def test_unflatten_rejects_wrong_length(ring_grid):
    with pytest.raises(DimensionError):
        unflatten(np.zeros(39), ring_grid)


def test_normalize_then_denormalize_restores_state(latlon_grid, random_state):
    series = [random_state(latlon_grid, time=t, scale=3.0, offset=10.0) for t in range(5)]
    stats = compute_norm_stats(series)
    restored = denormalize(normalize(series[0], stats), stats)
    np.testing.assert_allclose(restored.values, series[0].values, atol=1e-12)


def test_normalized_series_has_zero_mean_unit_std(latlon_grid, random_state):
    series = [random_state(latlon_grid, time=t, scale=2.0, offset=-4.0) for t in range(6)]
    stats = compute_norm_stats(series)
    z = np.stack([normalize(s, stats).slot_values("z", level) for s in series for level in (500, 850)])
    assert z.mean() == pytest.approx(0.0, abs=1e-12)
    assert z.std() == pytest.approx(1.0)


def test_norm_stats_ignore_inactive_slots(latlon_grid, random_state):
    series = [random_state(latlon_grid, time=t, offset=5.0) for t in range(3)]
    stats = compute_norm_stats(series)
    t2m = np.stack([s.slot_values("t2m") for s in series])
    assert stats.means["t2m"] == pytest.approx(t2m.mean())


def test_constant_variable_is_degenerate(ring_grid):
    series = [StateField(grid=ring_grid, values=np.full(ring_grid.shape, 2.0), time=t) for t in (0, 3)]
    with pytest.raises(DegenerateStatisticsError):
        compute_norm_stats(series)


def test_empty_series_is_degenerate():
    with pytest.raises(DegenerateStatisticsError):
        compute_norm_stats([])


def test_missing_statistics_raise(latlon_grid, random_state):
    stats = NormStats(means={"z": 0.0}, stds={"z": 1.0})
    with pytest.raises(MissingStatsError):
        normalize(random_state(latlon_grid), stats)


def test_zero_std_rejected():
    with pytest.raises(DegenerateStatisticsError):
        NormStats(means={"x": 0.0}, stds={"x": 0.0})


def test_climatology_is_time_mean(ring_grid):
    series = [StateField(grid=ring_grid, values=np.full(ring_grid.shape, float(t)), time=t) for t in (0, 3, 6)]
    np.testing.assert_allclose(compute_climatology(series).values, 3.0)
