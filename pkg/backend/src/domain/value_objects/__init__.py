"""
Domain Value Objects.

Immutable value objects for the domain layer.
"""

from .da_method import DAMethod
from .record_status import RecordStatus
from .solver_exit import SolverExitReason
from .topology import Topology
from .variable_kind import VariableKind

__all__ = [
    "DAMethod",
    "RecordStatus",
    "SolverExitReason",
    "Topology",
    "VariableKind",
]
