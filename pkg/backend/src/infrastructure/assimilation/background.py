"""
Static background-error covariance estimated from a truth run.

Each truth state is perturbed, forecast `lead` hours and compared with the
truth valid at that time; the per-slot mean squared difference becomes the
variance of B.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from src.domain.entities.grid import GridSpec
from src.domain.entities.observations import SlotKey
from src.domain.entities.state import StateField
from src.domain.exceptions import DegenerateStatisticsError
from src.infrastructure.dynamics.aggregation import forecast_hta
from src.infrastructure.dynamics.base import DynamicsModel
from src.infrastructure.osse.randomness import PERTURBATION_STREAM, keyed_generator

from .covariances import BackgroundCov

logger = logging.getLogger(__name__)


def slot_stds(series: Sequence[StateField]) -> dict[SlotKey, float]:
    """Climatological std of each slot over space and time."""
    grid = series[0].grid
    stack = np.stack([s.values for s in series])
    return {
        slot.key: float(stack[:, slot.var_index, slot.level_index].std())
        for slot in grid.slots()
    }


def perturb_state(
    state: StateField,
    scales: dict[SlotKey, float],
    *,
    seed: int,
    tag: int = 0,
) -> StateField:
    """Add N(0, scale^2) noise per slot from a stream keyed by (seed, tag, time)."""
    grid: GridSpec = state.grid
    rng = keyed_generator(seed, PERTURBATION_STREAM, tag, state.time)
    values = np.array(state.values)
    for slot in grid.slots():
        scale = scales.get(slot.key, 0.0)
        if scale:
            values[slot.var_index, slot.level_index] += scale * rng.standard_normal(
                (grid.n_lat, grid.n_lon)
            )
    return state.with_values(values)


def estimate_background_cov(
    model: DynamicsModel,
    truth: Sequence[StateField],
    *,
    lead: int = 24,
    perturbation_scale: float = 0.1,
    variance_scale: float = 1.0,
    seed: int = 0,
    max_samples: int | None = None,
    correlation_length: float | None = None,
) -> BackgroundCov:
    """B from forecast-minus-truth differences.

    The per-slot variances are measured; `correlation_length` (in cells)
    adds a Gaspari-Cohn horizontal correlation, None keeps B diagonal.

    Raises:
        DegenerateStatisticsError: No usable pairs, or a slot whose forecast
            error vanished (perfect model with zero perturbation).
    """
    if not truth:
        raise DegenerateStatisticsError("Background estimation needs a truth run.")
    grid = truth[0].grid
    by_time = {s.time: s for s in truth}
    stds = slot_stds(truth)
    scales = {key: perturbation_scale * std for key, std in stds.items()}

    starts = [s for s in truth if s.time + lead in by_time]
    if max_samples is not None and len(starts) > max_samples:
        stride = len(starts) / max_samples
        starts = [starts[int(i * stride)] for i in range(max_samples)]
    if not starts:
        raise DegenerateStatisticsError(f"No truth pairs {lead} h apart for background estimation.")

    sums = {slot.key: 0.0 for slot in grid.slots()}
    for state in starts:
        forecast = forecast_hta(model, perturb_state(state, scales, seed=seed), lead)
        diff = forecast.values - by_time[state.time + lead].values
        for slot in grid.slots():
            sums[slot.key] += float(np.mean(diff[slot.var_index, slot.level_index] ** 2))

    variances = {key: variance_scale * total / len(starts) for key, total in sums.items()}
    degenerate = [key for key, value in variances.items() if not value > 0]
    if degenerate:
        raise DegenerateStatisticsError(
            f"Zero forecast-error variance for {degenerate}; use a perturbation or a model twin"
        )
    logger.info(f"Estimated background variances from {len(starts)} forecast pairs")
    return BackgroundCov(grid=grid, variances=variances, correlation_length=correlation_length)
