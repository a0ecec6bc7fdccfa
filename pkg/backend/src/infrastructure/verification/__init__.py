"""Verification scores and summaries."""

from .scores import (
    acc_latweighted,
    l1_latweighted,
    rmse_latweighted,
    skill_horizon,
    slot_scores,
)
from .summary import SummaryAccumulator, launch_series, metric_series, summarize

__all__ = [
    "SummaryAccumulator",
    "acc_latweighted",
    "l1_latweighted",
    "launch_series",
    "metric_series",
    "rmse_latweighted",
    "skill_horizon",
    "slot_scores",
    "summarize",
]
