"""
Domain Entities.

Core entities of the assimilation engine.
"""

from .analysis import AnalysisResult, SolverDiagnostics
from .cycle import CycleConfig, CycleRecord, ForecastLaunch, HTAAConfig
from .ensemble import EnsembleState
from .grid import SURFACE, FieldSlot, GridSpec, VariableSpec
from .lead import LeadDecomposition
from .observations import MaskSpec, ObsEntry, ObsErrorTable, ObsSet
from .regressor import IncrementRegressor
from .state import StateField
from .statistics import Climatology, NormStats
from .verification import MetricSeries, SummaryRow, SummaryTable

__all__ = [
    # Geometry and states
    "SURFACE",
    "FieldSlot",
    "GridSpec",
    "VariableSpec",
    "StateField",
    "NormStats",
    "Climatology",
    # Dynamics
    "LeadDecomposition",
    # Observations
    "MaskSpec",
    "ObsEntry",
    "ObsErrorTable",
    "ObsSet",
    # Assimilation
    "AnalysisResult",
    "EnsembleState",
    "IncrementRegressor",
    "SolverDiagnostics",
    # Cycling and verification
    "CycleConfig",
    "CycleRecord",
    "ForecastLaunch",
    "HTAAConfig",
    "MetricSeries",
    "SummaryRow",
    "SummaryTable",
]
