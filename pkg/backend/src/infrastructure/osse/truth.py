"""Truth (nature) runs and their time splits."""

from __future__ import annotations

import logging
from collections.abc import Sequence

from src.domain.entities.state import StateField
from src.infrastructure.dynamics.aggregation import forecast_hta
from src.infrastructure.dynamics.base import DynamicsModel

logger = logging.getLogger(__name__)

SPLITS = ("train", "val", "test")


def run_truth(
    model: DynamicsModel, x0: StateField, horizon: int, save_every: int
) -> list[StateField]:
    """Trajectory [x0, M(x0), ...] saved every `save_every` hours.

    Raises:
        ValueError: save_every does not divide horizon.
    """
    if horizon < 0 or save_every <= 0:
        raise ValueError("horizon must be >= 0 and save_every > 0")
    if horizon % save_every:
        raise ValueError(f"save_every={save_every} does not divide horizon={horizon}")
    states = [x0]
    for _ in range(horizon // save_every):
        states.append(forecast_hta(model, states[-1], save_every))
    logger.debug(f"Truth run produced {len(states)} states up to t={states[-1].time}")
    return states


def spin_up(model: DynamicsModel, x0: StateField, hours: int, step: int) -> StateField:
    """Integrate onto the attractor and reset the clock to 0."""
    state = x0
    for _ in range(hours // step if hours else 0):
        state = forecast_hta(model, state, step)
    return state.at_time(0)


def split_series(
    series: Sequence[StateField], fractions: tuple[float, float, float]
) -> dict[str, list[StateField]]:
    """Contiguous train/val/test split by time order."""
    if len(fractions) != 3 or any(f < 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"Split fractions must be three non-negative values summing to 1: {fractions}")
    n = len(series)
    n_train = int(round(fractions[0] * n))
    n_val = int(round(fractions[1] * n))
    n_train = min(n_train, n)
    n_val = min(n_val, n - n_train)
    return {
        "train": list(series[:n_train]),
        "val": list(series[n_train : n_train + n_val]),
        "test": list(series[n_train + n_val :]),
    }
