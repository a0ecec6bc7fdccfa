"""Cycling experiments, medium-range launches and background tuning."""

from .runner import (
    build_background,
    initial_background,
    launch_medium_range,
    run_cycle,
    schedule_launches,
)
from .tuning import normalized_analysis_rmse, tune_background_cov

__all__ = [
    "build_background",
    "initial_background",
    "launch_medium_range",
    "normalized_analysis_rmse",
    "run_cycle",
    "schedule_launches",
    "tune_background_cov",
]
