"""Domain services: pure functions over domain entities."""

from .fields import (
    compute_climatology,
    compute_norm_stats,
    denormalize,
    flatten,
    latitude_weights,
    normalize,
    unflatten,
)

__all__ = [
    "compute_climatology",
    "compute_norm_stats",
    "denormalize",
    "flatten",
    "latitude_weights",
    "normalize",
    "unflatten",
]
