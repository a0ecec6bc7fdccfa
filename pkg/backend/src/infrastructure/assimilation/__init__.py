"""Analysis algorithms: variational, Kalman, ensemble and learned increments."""

from .background import estimate_background_cov, perturb_state, slot_stds
from .covariances import (
    BackgroundCov,
    CovarianceOperator,
    EnsembleCov,
    HybridCov,
    ObsCov,
    hybrid_cov,
)
from .ensemble import enkf_analysis, ensemble_stats, recenter, sample_ensemble
from .features import (
    TrainingSample,
    build_features,
    build_sample,
    mask_filled_observations,
    mask_indicator,
    obs_term_gradient,
    sample_features,
)
from .kalman import kf_analysis, kf_forecast, spd_solve
from .localization import gaspari_cohn, horizontal_distance
from .regressor import apply_regressor, fit_increment_regressor
from .strategies import AnalysisContext, AnalysisStrategy, build_strategy
from .training import build_training_samples, training_backgrounds
from .variational import (
    ObservationWindow,
    SolverConfig,
    cost_4dvar,
    fgat_threedvar,
    grad_4dvar,
    minimize_4dvar,
    threedvar,
)

__all__ = [
    "AnalysisContext",
    "AnalysisStrategy",
    "BackgroundCov",
    "CovarianceOperator",
    "EnsembleCov",
    "HybridCov",
    "ObsCov",
    "ObservationWindow",
    "SolverConfig",
    "TrainingSample",
    "apply_regressor",
    "build_features",
    "build_sample",
    "build_strategy",
    "build_training_samples",
    "cost_4dvar",
    "enkf_analysis",
    "ensemble_stats",
    "estimate_background_cov",
    "fgat_threedvar",
    "fit_increment_regressor",
    "gaspari_cohn",
    "grad_4dvar",
    "horizontal_distance",
    "hybrid_cov",
    "kf_analysis",
    "kf_forecast",
    "mask_filled_observations",
    "mask_indicator",
    "minimize_4dvar",
    "obs_term_gradient",
    "perturb_state",
    "recenter",
    "sample_ensemble",
    "sample_features",
    "slot_stds",
    "spd_solve",
    "threedvar",
    "training_backgrounds",
]
