"""
Latitude-weighted verification scores.

RMSE takes the square root per sample before averaging over samples. ACC
applies the latitude weight to the numerator and to both factors of the
denominator, summing over every sample jointly.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from src.domain.entities.grid import LevelLabel
from src.domain.entities.state import FloatArray, StateField
from src.domain.entities.statistics import Climatology
from src.domain.entities.verification import MetricSeries
from src.domain.exceptions import AlignmentError, UndefinedMetricError
from src.domain.services.fields import latitude_weights

StateSeries = StateField | Sequence[StateField]


def _as_list(states: StateSeries) -> list[StateField]:
    return [states] if isinstance(states, StateField) else list(states)


def _aligned(candidates: StateSeries, truths: StateSeries) -> tuple[list[StateField], list[StateField]]:
    cands, truth = _as_list(candidates), _as_list(truths)
    if not cands or len(cands) != len(truth):
        raise AlignmentError(
            f"Need matching non-empty series, got {len(cands)} candidates and {len(truth)} truths"
        )
    for c, t in zip(cands, truth, strict=True):
        if c.grid != t.grid:
            raise AlignmentError("Candidate and truth are on different grids.")
        if c.time != t.time:
            raise AlignmentError(f"Candidate at {c.time} h is compared with truth at {t.time} h")
    return cands, truth


def _slot_stack(
    states: list[StateField], variable: str, level: LevelLabel | None
) -> FloatArray:
    return np.stack([s.slot_values(variable, level) for s in states])


def rmse_latweighted(
    candidates: StateSeries,
    truths: StateSeries,
    variable: str,
    level: LevelLabel | None = None,
) -> float:
    """(1/K) sum_k sqrt( mean_ij L(j) (x_k - t_k)^2 ).

    Raises:
        AlignmentError: Different lengths, grids or times.
    """
    cands, truth = _aligned(candidates, truths)
    weights = latitude_weights(cands[0].grid)[None, :, None]
    diff = _slot_stack(cands, variable, level) - _slot_stack(truth, variable, level)
    per_sample = np.sqrt(np.mean(weights * diff**2, axis=(1, 2)))
    return float(per_sample.mean())


def acc_latweighted(
    candidates: StateSeries,
    truths: StateSeries,
    climatology: Climatology | StateField,
    variable: str,
    level: LevelLabel | None = None,
) -> float:
    """Weighted anomaly correlation about the climatology.

    A candidate with no anomaly (e.g. the climatology itself) scores 0.

    Raises:
        AlignmentError: Different lengths, grids or times.
        UndefinedMetricError: The truth has zero weighted anomaly variance.
    """
    cands, truth = _aligned(candidates, truths)
    grid = cands[0].grid
    if climatology.grid != grid:
        raise AlignmentError("Climatology is on a different grid.")
    slot = grid.slot(variable, level)
    clim = climatology.values[slot.var_index, slot.level_index]
    weights = latitude_weights(grid)[None, :, None]
    cand_anom = _slot_stack(cands, variable, level) - clim
    truth_anom = _slot_stack(truth, variable, level) - clim

    truth_var = float(np.sum(weights * truth_anom**2))
    if truth_var == 0.0:
        raise UndefinedMetricError(
            f"ACC of {slot.label} is undefined: the truth equals the climatology"
        )
    cand_var = float(np.sum(weights * cand_anom**2))
    if cand_var == 0.0:
        return 0.0
    numerator = float(np.sum(weights * cand_anom * truth_anom))
    return float(np.clip(numerator / np.sqrt(cand_var * truth_var), -1.0, 1.0))


def l1_latweighted(candidates: StateSeries, truths: StateSeries) -> float:
    """Mean of L(j) |x - t| over samples, active slots and cells."""
    cands, truth = _aligned(candidates, truths)
    grid = cands[0].grid
    weights = latitude_weights(grid)[:, None]
    total = 0.0
    for c, t in zip(cands, truth, strict=True):
        for slot in grid.slots():
            diff = c.values[slot.var_index, slot.level_index] - t.values[slot.var_index, slot.level_index]
            total += float(np.sum(weights * np.abs(diff)))
    return total / (len(cands) * len(grid.slots()) * grid.n_cells)


def skill_horizon(acc_series: MetricSeries, threshold: float = 0.6) -> int:
    """Largest lead with ACC above `threshold` before the first drop to or below it."""
    horizon = 0
    for lead, value in sorted(acc_series.points):
        if not value > threshold:
            break
        horizon = lead
    return horizon


def slot_scores(
    candidate: StateField,
    truth: StateField,
    climatology: Climatology | None = None,
) -> dict[str, dict[str, float]]:
    """RMSE (and ACC when defined) for every active slot, keyed by label."""
    scores: dict[str, dict[str, float]] = {}
    for slot in candidate.grid.slots():
        entry = {"rmse": rmse_latweighted(candidate, truth, slot.variable, slot.level)}
        if climatology is not None:
            try:
                entry["acc"] = acc_latweighted(
                    candidate, truth, climatology, slot.variable, slot.level
                )
            except UndefinedMetricError:
                pass
        scores[slot.label] = entry
    return scores
