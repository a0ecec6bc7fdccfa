"""
Analysis strategies: one interface over every method a cycle can run.

Strategies are built once per experiment. Ensemble-based strategies keep
their ensemble between calls and move it forward to each new background.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from src.domain.entities.analysis import AnalysisResult, SolverDiagnostics
from src.domain.entities.ensemble import EnsembleState
from src.domain.entities.observations import ObsSet
from src.domain.entities.regressor import IncrementRegressor
from src.domain.entities.state import StateField
from src.domain.entities.statistics import NormStats
from src.domain.exceptions import CycleInitializationError
from src.domain.value_objects.da_method import DAMethod
from src.domain.value_objects.solver_exit import SolverExitReason
from src.infrastructure.dynamics.aggregation import propagate_array
from src.infrastructure.dynamics.base import DynamicsModel

from .covariances import BackgroundCov, ObsCov
from .ensemble import enkf_analysis, ensemble_stats, recenter, sample_ensemble
from .features import mask_filled_observations, mask_indicator, obs_term_gradient
from .regressor import apply_regressor
from .variational import SolverConfig, Window, fgat_threedvar, minimize_4dvar, threedvar

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AnalysisContext:
    """Everything a strategy may need besides the background and the window."""

    model: DynamicsModel
    b: BackgroundCov
    r: ObsCov
    solver: SolverConfig = field(default_factory=SolverConfig)
    ensemble_size: int = 20
    inflation: float = 1.0
    localization: float | None = None
    hybrid_beta: float = 0.5
    regressor: IncrementRegressor | None = None
    norm_stats: NormStats | None = None
    seed: int = 0


def _passthrough(x_b: StateField) -> AnalysisResult:
    return AnalysisResult(
        analysis=x_b,
        diagnostics=SolverDiagnostics(exit_reason=SolverExitReason.PASSTHROUGH),
    )


class AnalysisStrategy(ABC):
    """Produces x^a at the window start from x_b and the window observations."""

    method: DAMethod

    def __init__(self, context: AnalysisContext) -> None:
        self.context = context

    @abstractmethod
    def analyze(self, x_b: StateField, window_obs: ObsSet, window: Window) -> AnalysisResult:
        """Analysis valid at window[0] == x_b.time."""


class NoAssimilation(AnalysisStrategy):
    """Free run: the background is the analysis."""

    method = DAMethod.NONE

    def analyze(self, x_b: StateField, window_obs: ObsSet, window: Window) -> AnalysisResult:
        return _passthrough(x_b)


class ThreeDVarStrategy(AnalysisStrategy):
    """3DVar at the window start; later window observations enter through FGAT."""

    method = DAMethod.THREEDVAR

    def analyze(self, x_b: StateField, window_obs: ObsSet, window: Window) -> AnalysisResult:
        ctx = self.context
        observed = [e for e in window_obs.entries if e.n_obs]
        if not observed:
            return _passthrough(x_b)
        if all(e.time == window[0] for e in observed):
            return threedvar(x_b, ctx.b, observed[0], ctx.r, ctx.solver)
        return fgat_threedvar(x_b, ctx.b, window_obs, ctx.r, ctx.model, window)


class FourDVarStrategy(AnalysisStrategy):
    method = DAMethod.FOURDVAR

    def analyze(self, x_b: StateField, window_obs: ObsSet, window: Window) -> AnalysisResult:
        ctx = self.context
        return minimize_4dvar(x_b, ctx.b, window_obs, ctx.r, ctx.model, window, ctx.solver)


class EnKFStrategy(AnalysisStrategy):
    """Perturbed-observation EnKF over the whole window.

    The first call draws the ensemble from N(x_b, B); later calls forecast
    the previous analysis ensemble to the background time and recentre it
    on x_b.
    """

    method = DAMethod.ENKF

    def __init__(self, context: AnalysisContext) -> None:
        super().__init__(context)
        self.ensemble: EnsembleState | None = None

    def forecast_ensemble(self, x_b: StateField) -> EnsembleState:
        ctx = self.context
        if self.ensemble is None:
            return sample_ensemble(x_b, ctx.b, ctx.ensemble_size, seed=ctx.seed)
        gap = x_b.time - self.ensemble.time
        if gap < 0:
            raise CycleInitializationError(
                f"Ensemble at {self.ensemble.time} h is newer than the background at {x_b.time} h"
            )
        matrix = self.ensemble.as_matrix()
        if gap:
            for k in range(matrix.shape[1]):
                matrix[:, k] = propagate_array(ctx.model, matrix[:, k], gap)
        moved = EnsembleState.from_matrix(matrix, x_b.grid, x_b.time)
        return recenter(moved, x_b)

    def update(self, forecast: EnsembleState, window_obs: ObsSet) -> EnsembleState:
        ctx = self.context
        return enkf_analysis(
            forecast,
            window_obs,
            ctx.r,
            inflation=ctx.inflation,
            localization=ctx.localization,
            seed=ctx.seed,
            model=ctx.model,
        )

    def analyze(self, x_b: StateField, window_obs: ObsSet, window: Window) -> AnalysisResult:
        forecast = self.forecast_ensemble(x_b)
        analysis_ensemble = self.update(forecast, window_obs)
        mean, _, _ = ensemble_stats(analysis_ensemble)
        spread = ensemble_stats(forecast)[1]
        self.ensemble = analysis_ensemble
        return AnalysisResult(
            analysis=mean,
            diagnostics=SolverDiagnostics(
                exit_reason=SolverExitReason.CLOSED_FORM,
                extra={
                    "members": float(analysis_ensemble.size),
                    "forecast_spread": float((spread**2).sum(axis=1).mean() ** 0.5),
                },
            ),
            ensemble=analysis_ensemble,
        )


class HybridStrategy(EnKFStrategy):
    """4DVar with beta B + (1 - beta) P^e; the EnKF ensemble is recentred on its analysis."""

    method = DAMethod.HYBRID

    def analyze(self, x_b: StateField, window_obs: ObsSet, window: Window) -> AnalysisResult:
        ctx = self.context
        forecast = self.forecast_ensemble(x_b)
        _, anomalies, _ = ensemble_stats(forecast)
        b_hybrid = ctx.b.hybridized(anomalies, ctx.hybrid_beta)
        result = minimize_4dvar(x_b, b_hybrid, window_obs, ctx.r, ctx.model, window, ctx.solver)
        analysis_ensemble = recenter(self.update(forecast, window_obs), result.analysis)
        self.ensemble = analysis_ensemble
        return AnalysisResult(
            analysis=result.analysis,
            diagnostics=result.diagnostics,
            ensemble=analysis_ensemble,
        )


class RegressorStrategy(AnalysisStrategy):
    """Learned increment from window-start observations and the window gradient."""

    method = DAMethod.REGRESSOR

    def __init__(self, context: AnalysisContext) -> None:
        if context.regressor is None:
            raise CycleInitializationError(
                "The regressor method needs a fitted regressor; run the training step first"
            )
        super().__init__(context)

    def analyze(self, x_b: StateField, window_obs: ObsSet, window: Window) -> AnalysisResult:
        ctx = self.context
        entry = window_obs.at(window[0])
        grad = obs_term_gradient(x_b, window_obs, ctx.r, ctx.model, window)
        return apply_regressor(
            ctx.regressor,  # type: ignore[arg-type]
            x_b,
            mask_filled_observations(x_b, entry),
            mask_indicator(x_b.grid, entry, x_b.time),
            grad,
            ctx.norm_stats,
        )


_STRATEGIES: dict[DAMethod, type[AnalysisStrategy]] = {
    DAMethod.NONE: NoAssimilation,
    DAMethod.THREEDVAR: ThreeDVarStrategy,
    DAMethod.FOURDVAR: FourDVarStrategy,
    DAMethod.ENKF: EnKFStrategy,
    DAMethod.HYBRID: HybridStrategy,
    DAMethod.REGRESSOR: RegressorStrategy,
}


def build_strategy(method: DAMethod, context: AnalysisContext) -> AnalysisStrategy:
    strategy = _STRATEGIES[method](context)
    logger.debug(f"Built {type(strategy).__name__} for method {method.value}")
    return strategy
