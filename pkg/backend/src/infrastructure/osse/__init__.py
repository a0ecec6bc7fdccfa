"""Observing system simulation: truth runs, masks and synthetic observations."""

from .masks import generate_mask, masked_count
from .observations import (
    mask_observations,
    masks_as_array,
    obs_set_from_arrays,
    select_cadence,
    simulate_noisy_fields,
    simulate_observations,
)
from .operator import ObservationOperator, apply_obs_operator, observation_vector
from .truth import SPLITS, run_truth, spin_up, split_series

__all__ = [
    "SPLITS",
    "ObservationOperator",
    "apply_obs_operator",
    "generate_mask",
    "mask_observations",
    "masked_count",
    "masks_as_array",
    "obs_set_from_arrays",
    "observation_vector",
    "run_truth",
    "select_cadence",
    "simulate_noisy_fields",
    "simulate_observations",
    "spin_up",
    "split_series",
]
