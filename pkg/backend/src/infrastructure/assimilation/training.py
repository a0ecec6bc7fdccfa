"""Training pairs for the increment regressor from a truth run."""

from __future__ import annotations

import logging
from collections.abc import Sequence

from src.domain.entities.observations import ObsSet
from src.domain.entities.state import StateField
from src.infrastructure.dynamics.aggregation import forecast_hta
from src.infrastructure.dynamics.base import DynamicsModel

from .background import perturb_state, slot_stds
from .covariances import ObsCov
from .features import TrainingSample, build_sample

logger = logging.getLogger(__name__)

BACKGROUND_LEAD = 24
_BACKGROUND_TAG = 1


def training_backgrounds(
    model: DynamicsModel,
    truth: Sequence[StateField],
    *,
    window_hours: int = 12,
    perturbation_scale: float = 0.1,
    seed: int = 0,
) -> list[StateField]:
    """24 h forecasts from perturbed truth, valid at every window-multiple time.

    With a perturbed model twin the model error alone already separates the
    backgrounds from the truth.
    """
    if not truth:
        return []
    by_time = {s.time: s for s in truth}
    scales = {key: perturbation_scale * std for key, std in slot_stds(truth).items()}
    backgrounds = []
    for state in truth:
        origin = by_time.get(state.time - BACKGROUND_LEAD)
        if state.time % window_hours or origin is None:
            continue
        perturbed = perturb_state(origin, scales, seed=seed, tag=_BACKGROUND_TAG)
        backgrounds.append(forecast_hta(model, perturbed, BACKGROUND_LEAD))
    return backgrounds


def build_training_samples(
    model: DynamicsModel,
    truth: Sequence[StateField],
    obs: ObsSet,
    r: ObsCov,
    backgrounds: Sequence[StateField],
    *,
    window_hours: int = 12,
    max_samples: int | None = None,
) -> list[TrainingSample]:
    """One sample per background whose whole window is observed."""
    by_time = {s.time: s for s in truth}
    obs_times = set(obs.times())
    usable = [
        b
        for b in backgrounds
        if b.time in by_time
        and b.time in obs_times
        and b.time + window_hours - obs.cadence in obs_times
    ]
    if max_samples is not None and len(usable) > max_samples:
        stride = len(usable) / max_samples
        usable = [usable[int(i * stride)] for i in range(max_samples)]

    samples = []
    for x_b in usable:
        window = (x_b.time, x_b.time + window_hours)
        samples.append(
            build_sample(x_b, obs.window(*window), r, model, window, by_time[x_b.time])
        )
    logger.info(f"Built {len(samples)} regressor training samples")
    return samples
