"""
Observation-gradient features and training samples for the increment
regressor.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.domain.entities.grid import GridSpec
from src.domain.entities.observations import ObsEntry, ObsSet
from src.domain.entities.state import FloatArray, StateField
from src.domain.entities.statistics import NormStats
from src.infrastructure.dynamics.base import DynamicsModel

from .covariances import ObsCov
from .variational import Window, grad_4dvar


def obs_term_gradient(
    x_b: StateField,
    obs: ObsSet | ObsEntry,
    r: ObsCov,
    model: DynamicsModel | None,
    window: Window,
) -> StateField:
    """Gradient at x_b of 1/2 sum_k |y_k - H_k M_k(x)|^2_{R^-1}."""
    return grad_4dvar(x_b, x_b, None, obs, r, model, window)


def mask_indicator(grid: GridSpec, entry: ObsEntry | None, time: int) -> StateField:
    """1.0 at observed cells, 0.0 elsewhere."""
    values = np.zeros(grid.shape)
    if entry is not None:
        for slot in grid.slots():
            mask = entry.masks.get(slot.key)
            if mask is not None:
                values[slot.var_index, slot.level_index] = mask.astype(np.float64)
    return StateField(grid=grid, values=values, time=time)


def mask_filled_observations(x_b: StateField, entry: ObsEntry | None) -> StateField:
    """Observed values where available, the background elsewhere."""
    values = np.array(x_b.values)
    if entry is not None:
        for slot in x_b.grid.slots():
            if slot.key in entry.masks:
                cells = values[slot.var_index, slot.level_index]
                cells[entry.masks[slot.key]] = entry.values[slot.key]
    return x_b.with_values(values)


@dataclass(frozen=True, eq=False)
class TrainingSample:
    """Inputs of one assimilation window and the truth at its start."""

    background: StateField
    obs_filled: StateField
    mask: StateField
    grad_feature: StateField
    truth: StateField


def build_sample(
    x_b: StateField,
    window_obs: ObsSet,
    r: ObsCov,
    model: DynamicsModel | None,
    window: Window,
    truth: StateField,
) -> TrainingSample:
    """Features from window-start observations plus the whole-window gradient."""
    entry = window_obs.at(window[0])
    return TrainingSample(
        background=x_b,
        obs_filled=mask_filled_observations(x_b, entry),
        mask=mask_indicator(x_b.grid, entry, x_b.time),
        grad_feature=obs_term_gradient(x_b, window_obs, r, model, window),
        truth=truth,
    )


def _normalized_slot(
    values: FloatArray, mean: float, std: float, kind: str
) -> FloatArray:
    if kind in ("background", "observation"):
        return (values - mean) / std
    if kind == "gradient":
        return values * std
    return values


def build_features(
    background: StateField,
    obs_filled: StateField,
    mask: StateField,
    grad_feature: StateField,
    stats: NormStats,
) -> FloatArray:
    """(4*S, n_cells) matrix in FEATURE_KINDS-major, slot-minor order.

    Background and observations are normalized, the gradient is scaled by the
    variable std (the gradient with respect to the normalized field) and the
    mask is left as 0/1.
    """
    grid = background.grid
    slots = grid.slots()
    rows = []
    sources = (
        ("background", background),
        ("observation", obs_filled),
        ("mask", mask),
        ("gradient", grad_feature),
    )
    for kind, state in sources:
        for slot in slots:
            cells = state.values[slot.var_index, slot.level_index].ravel()
            rows.append(
                _normalized_slot(
                    cells, stats.means[slot.variable], stats.stds[slot.variable], kind
                )
            )
    return np.stack(rows)


def sample_features(
    samples: Sequence[TrainingSample], stats: NormStats
) -> tuple[FloatArray, FloatArray]:
    """Stacked features (4*S, n) and normalized increment targets (S, n)."""
    features, targets = [], []
    for sample in samples:
        features.append(
            build_features(
                sample.background, sample.obs_filled, sample.mask, sample.grad_feature, stats
            )
        )
        grid = sample.background.grid
        diff = sample.truth.values - sample.background.values
        targets.append(
            np.stack(
                [
                    diff[s.var_index, s.level_index].ravel() / stats.stds[s.variable]
                    for s in grid.slots()
                ]
            )
        )
    return np.concatenate(features, axis=1), np.concatenate(targets, axis=1)
