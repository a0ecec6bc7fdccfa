"""Random observation masks."""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray

from src.domain.entities.grid import GridSpec
from src.domain.entities.observations import MaskSpec, SlotKey

from .randomness import MASK_STREAM, keyed_generator


def masked_count(masked_ratio: float, n_cells: int) -> int:
    """round(ratio * cells) with halves rounded away from zero."""
    return int(math.floor(masked_ratio * n_cells + 0.5))


def generate_mask(
    grid: GridSpec, mask_spec: MaskSpec, time: int
) -> dict[SlotKey, NDArray[np.bool_]]:
    """Observed-cell bitmap (True = observed) for every active slot.

    Each (variable, level) is masked independently; the masked cells are drawn
    uniformly without replacement from a stream keyed by
    (seed, time, variable, level). With regenerate_each_time off, every time
    shares the time-0 mask.
    """
    n_cells = grid.n_cells
    n_masked = masked_count(mask_spec.masked_ratio, n_cells)
    key_time = time if mask_spec.regenerate_each_time else 0
    masks: dict[SlotKey, NDArray[np.bool_]] = {}
    for slot in grid.slots():
        observed = np.ones(n_cells, dtype=bool)
        if n_masked:
            rng = keyed_generator(
                mask_spec.seed, MASK_STREAM, key_time, slot.var_index, slot.level_index
            )
            observed[rng.choice(n_cells, size=n_masked, replace=False)] = False
        masks[slot.key] = observed.reshape(grid.n_lat, grid.n_lon)
    return masks
