"""
Simulated observations: truth plus Gaussian noise, sampled through masks.

Noisy fields are generated for every cell of every observed slot, so the same
noisy fields serve every mask ratio; masks only decide which cells are kept.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from src.domain.entities.grid import GridSpec
from src.domain.entities.observations import (
    MaskSpec,
    ObsEntry,
    ObsErrorTable,
    ObsSet,
    SlotKey,
)
from src.domain.entities.state import StateField

from .masks import generate_mask
from .randomness import NOISE_STREAM, keyed_generator


def select_cadence(series: Sequence[StateField], cadence: int) -> list[StateField]:
    """States whose time is a multiple of the cadence.

    Raises:
        ValueError: A cadence time inside the series span is missing.
    """
    if cadence <= 0:
        raise ValueError("Observation cadence must be > 0")
    selected = [s for s in series if s.time % cadence == 0]
    if series:
        expected = range(selected[0].time, series[-1].time + 1, cadence) if selected else []
        if [s.time for s in selected] != list(expected):
            raise ValueError(
                f"Truth spacing is not compatible with an observation cadence of {cadence} h"
            )
    return selected


def simulate_noisy_fields(
    truth: Sequence[StateField], table: ObsErrorTable, noise_seed: int
) -> list[StateField]:
    """y = x^t + eps on every cell of observed slots; unobserved slots hold 0.

    eps ~ N(0, sigma^2) is drawn from a stream keyed by
    (noise_seed, time, variable, level).
    """
    if not truth:
        return []
    grid = truth[0].grid
    resolved = table.for_grid(grid)
    noisy: list[StateField] = []
    for state in truth:
        values = np.zeros(grid.shape)
        for slot in grid.slots():
            sigma = resolved.sigmas[slot.key]
            if sigma is None:
                continue
            rng = keyed_generator(
                noise_seed, NOISE_STREAM, state.time, slot.var_index, slot.level_index
            )
            noise = rng.standard_normal((grid.n_lat, grid.n_lon)) * sigma
            values[slot.var_index, slot.level_index] = (
                state.values[slot.var_index, slot.level_index] + noise
            )
        noisy.append(state.with_values(values))
    return noisy


def observation_masks(
    grid: GridSpec, table: ObsErrorTable, mask_spec: MaskSpec, time: int
) -> dict[SlotKey, NDArray[np.bool_]]:
    """generate_mask restricted to observed (non-absent) slots."""
    resolved = table.for_grid(grid)
    return {
        key: mask
        for key, mask in generate_mask(grid, mask_spec, time).items()
        if resolved.is_observed(key)
    }


def entry_from_field(
    noisy: StateField, masks: dict[SlotKey, NDArray[np.bool_]]
) -> ObsEntry:
    grid = noisy.grid
    values = {}
    for slot in grid.slots():
        if slot.key not in masks:
            continue
        cells = noisy.values[slot.var_index, slot.level_index]
        values[slot.key] = cells[masks[slot.key]].copy()
    ordered_masks = {key: masks[key] for key in values}
    return ObsEntry(time=noisy.time, values=values, masks=ordered_masks)


def mask_observations(
    noisy_fields: Sequence[StateField],
    table: ObsErrorTable,
    mask_spec: MaskSpec,
    cadence: int,
) -> ObsSet:
    """Keep the unmasked cells of each noisy field."""
    entries = []
    for noisy in select_cadence(noisy_fields, cadence):
        masks = observation_masks(noisy.grid, table, mask_spec, noisy.time)
        entries.append(entry_from_field(noisy, masks))
    return ObsSet(cadence=cadence, entries=tuple(entries))


def simulate_observations(
    truth: Sequence[StateField],
    table: ObsErrorTable,
    mask_spec: MaskSpec,
    cadence: int = 3,
    *,
    noise_seed: int | None = None,
) -> ObsSet:
    """Noisy, masked observations of a truth run.

    Raises:
        ObservationConfigError: A grid slot has no sigma and is not absent.
    """
    selected = select_cadence(truth, cadence)
    seed = mask_spec.seed if noise_seed is None else noise_seed
    noisy = simulate_noisy_fields(selected, table, seed)
    return mask_observations(noisy, table, mask_spec, cadence)


def obs_set_from_arrays(
    noisy_fields: Sequence[StateField],
    mask_arrays: Sequence[NDArray[np.bool_]],
    table: ObsErrorTable,
    cadence: int,
) -> ObsSet:
    """Rebuild an ObsSet from stored noisy fields and grid-shaped masks."""
    if len(noisy_fields) != len(mask_arrays):
        raise ValueError("Need one mask array per noisy field.")
    entries = []
    for noisy, array in zip(noisy_fields, mask_arrays, strict=True):
        grid = noisy.grid
        resolved = table.for_grid(grid)
        masks = {
            slot.key: np.asarray(array[slot.var_index, slot.level_index], dtype=bool)
            for slot in grid.slots()
            if resolved.is_observed(slot.key)
        }
        entries.append(entry_from_field(noisy, masks))
    return ObsSet(cadence=cadence, entries=tuple(entries))


def masks_as_array(grid: GridSpec, masks: dict[SlotKey, NDArray[np.bool_]]) -> NDArray[np.bool_]:
    """Grid-shaped boolean array; unobserved and inactive slots are False."""
    array = np.zeros(grid.shape, dtype=bool)
    for slot in grid.slots():
        if slot.key in masks:
            array[slot.var_index, slot.level_index] = masks[slot.key]
    return array
