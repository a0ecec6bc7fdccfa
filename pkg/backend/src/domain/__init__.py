"""
Domain Layer.

Grids, states, observations, cycle records and verification results, plus the
repository ports and pure services over them. No infrastructure imports.
"""

from .entities import CycleRecord, GridSpec, ObsSet, StateField
from .value_objects import DAMethod, VariableKind

__all__ = [
    # Entities
    "CycleRecord",
    "GridSpec",
    "ObsSet",
    "StateField",
    # Value Objects
    "DAMethod",
    "VariableKind",
]
