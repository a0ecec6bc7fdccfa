"""Forward models and lead-time aggregation."""

from .advection import LatLonAdvectionModel
from .aggregation import forecast_hta, greedy_decompose, propagate_array
from .base import DynamicsModel
from .lorenz96 import Lorenz96Model

__all__ = [
    "DynamicsModel",
    "LatLonAdvectionModel",
    "Lorenz96Model",
    "forecast_hta",
    "greedy_decompose",
    "propagate_array",
]
