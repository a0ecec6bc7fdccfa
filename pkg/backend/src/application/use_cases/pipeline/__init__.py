"""Pipeline use cases: truth, observations, cycling, forecasts, evaluation, report."""

from .build_report import BuildReportRequest, BuildReportResponse, BuildReportUseCase
from .evaluate_metrics import (
    EvaluateMetricsRequest,
    EvaluateMetricsResponse,
    EvaluateMetricsUseCase,
)
from .generate_observations import (
    GenerateObservationsRequest,
    GenerateObservationsResponse,
    GenerateObservationsUseCase,
)
from .generate_truth import GenerateTruthRequest, GenerateTruthResponse, GenerateTruthUseCase
from .launch_forecasts import (
    LaunchForecastsRequest,
    LaunchForecastsResponse,
    LaunchForecastsUseCase,
)
from .run_cycle_experiment import (
    RunCycleExperimentRequest,
    RunCycleExperimentResponse,
    RunCycleExperimentUseCase,
    plan_cycles,
)
from .train_regressor import (
    TrainRegressorRequest,
    TrainRegressorResponse,
    TrainRegressorUseCase,
)

__all__ = [
    "BuildReportRequest",
    "BuildReportResponse",
    "BuildReportUseCase",
    "EvaluateMetricsRequest",
    "EvaluateMetricsResponse",
    "EvaluateMetricsUseCase",
    "GenerateObservationsRequest",
    "GenerateObservationsResponse",
    "GenerateObservationsUseCase",
    "GenerateTruthRequest",
    "GenerateTruthResponse",
    "GenerateTruthUseCase",
    "LaunchForecastsRequest",
    "LaunchForecastsResponse",
    "LaunchForecastsUseCase",
    "RunCycleExperimentRequest",
    "RunCycleExperimentResponse",
    "RunCycleExperimentUseCase",
    "TrainRegressorRequest",
    "TrainRegressorResponse",
    "TrainRegressorUseCase",
    "plan_cycles",
]
