"""
Field services: latitude weighting, flattening, normalization and climatology.

All functions are pure; states are never modified in place.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import FloatArray, StateField
from src.domain.entities.statistics import Climatology, NormStats
from src.domain.exceptions import (
    DegenerateStatisticsError,
    DimensionError,
    MissingStatsError,
)


def latitude_weights(grid: GridSpec) -> FloatArray:
    """L(j) = cos(lat_j) / mean(cos(lat)), so the weights average to one."""
    cos = np.cos(np.deg2rad(np.asarray(grid.lat_deg, dtype=np.float64)))
    cos = np.clip(cos, 0.0, None)
    return cos / cos.mean()


def flatten(state: StateField) -> FloatArray:
    """m-vector in [variable][level][lat][lon] order."""
    return state.values.reshape(-1).copy()


def unflatten(vector: FloatArray, grid: GridSpec, time: int = 0) -> StateField:
    vector = np.asarray(vector, dtype=np.float64)
    if vector.ndim != 1 or vector.size != grid.size:
        raise DimensionError(
            f"Vector of length {vector.size} does not match state size {grid.size}"
        )
    return StateField(grid=grid, values=vector.reshape(grid.shape), time=time)


def _stack(series: Sequence[StateField]) -> tuple[GridSpec, FloatArray]:
    if not series:
        raise DegenerateStatisticsError("Statistics need a non-empty series.")
    grid = series[0].grid
    for state in series:
        if state.grid != grid:
            raise DimensionError("All states of a series must share one grid.")
    return grid, np.stack([s.values for s in series])


def _variable_samples(grid: GridSpec, stack: FloatArray, var_index: int) -> FloatArray:
    levels = sorted({s.level_index for s in grid.slots() if s.var_index == var_index})
    return stack[:, var_index, levels]


def compute_norm_stats(series: Sequence[StateField]) -> NormStats:
    """Per-variable mean and population std over every active space-time point.

    Raises:
        DegenerateStatisticsError: Empty series or a constant variable.
    """
    grid, stack = _stack(series)
    means: dict[str, float] = {}
    stds: dict[str, float] = {}
    for vi, var in enumerate(grid.variables):
        samples = _variable_samples(grid, stack, vi)
        mean = float(samples.mean())
        std = float(np.sqrt(np.mean((samples - mean) ** 2)))
        if std == 0.0:
            raise DegenerateStatisticsError(
                f"Variable {var.name!r} is constant ({mean}); std is zero"
            )
        means[var.name] = mean
        stds[var.name] = std
    return NormStats(means=means, stds=stds)


def _affine(state: StateField, stats: NormStats, *, forward: bool) -> StateField:
    grid = state.grid
    missing = [n for n in grid.variable_names if n not in stats.means]
    if missing:
        raise MissingStatsError(f"No normalization statistics for variables {missing}")
    values = np.array(state.values)
    for slot in grid.slots():
        mean = stats.means[slot.variable]
        std = stats.stds[slot.variable]
        cells = values[slot.var_index, slot.level_index]
        if forward:
            values[slot.var_index, slot.level_index] = (cells - mean) / std
        else:
            values[slot.var_index, slot.level_index] = cells * std + mean
    return state.with_values(values)


def normalize(state: StateField, stats: NormStats) -> StateField:
    """(x - mean) / std per variable on active slots."""
    return _affine(state, stats, forward=True)


def denormalize(state: StateField, stats: NormStats) -> StateField:
    return _affine(state, stats, forward=False)


def compute_climatology(truth_series: Sequence[StateField]) -> Climatology:
    """Elementwise time mean of a truth series."""
    grid, stack = _stack(truth_series)
    return Climatology(grid=grid, values=stack.mean(axis=0))
