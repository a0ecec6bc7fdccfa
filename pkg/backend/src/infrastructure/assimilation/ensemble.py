"""
Ensemble statistics and the perturbed-observation ensemble Kalman filter.

When observations later than the ensemble time are supplied together with a
model, members are propagated to each observation time and the update is
applied at the ensemble time from the time-lagged covariances (4-D EnKF).
"""

from __future__ import annotations

import logging

import numpy as np

from src.domain.entities.ensemble import EnsembleState
from src.domain.entities.observations import ObsEntry, ObsSet
from src.domain.entities.state import FloatArray, StateField
from src.domain.exceptions import EnsembleSizeError, WindowError
from src.infrastructure.dynamics.aggregation import propagate_array
from src.infrastructure.dynamics.base import DynamicsModel
from src.infrastructure.osse.operator import ObservationOperator, observation_vector
from src.infrastructure.osse.randomness import ENSEMBLE_STREAM, keyed_generator

from .covariances import BackgroundCov, EnsembleCov, ObsCov
from .kalman import spd_solve
from .localization import gaspari_cohn, horizontal_distance

logger = logging.getLogger(__name__)


def ensemble_stats(ensemble: EnsembleState) -> tuple[StateField, FloatArray, EnsembleCov]:
    """Mean, scaled anomalies X = (x_n - mean) / sqrt(N - 1) and P^e = X X^T."""
    matrix = ensemble.as_matrix()
    mean = matrix.mean(axis=1)
    anomalies = (matrix - mean[:, None]) / np.sqrt(ensemble.size - 1)
    mean_state = StateField(
        grid=ensemble.grid, values=mean.reshape(ensemble.grid.shape), time=ensemble.time
    )
    return mean_state, anomalies, EnsembleCov(anomalies=anomalies)


def sample_ensemble(
    center: StateField, b: BackgroundCov, size: int, *, seed: int
) -> EnsembleState:
    """Members center + B^{1/2} xi with xi ~ N(0, I), keyed by (seed, time)."""
    if size < 2:
        raise EnsembleSizeError(f"Ensemble needs at least 2 members, got {size}")
    rng = keyed_generator(seed, ENSEMBLE_STREAM, 0, center.time)
    xi = rng.standard_normal((center.grid.size, size))
    spread = np.stack([b.sqrt_apply(xi[:, k]) for k in range(size)], axis=1)
    matrix = center.values.ravel()[:, None] + spread
    return EnsembleState.from_matrix(matrix, center.grid, center.time)


def recenter(ensemble: EnsembleState, center: StateField) -> EnsembleState:
    """Shift members so their mean equals `center`."""
    matrix = ensemble.as_matrix()
    shifted = matrix - matrix.mean(axis=1, keepdims=True) + center.values.ravel()[:, None]
    return EnsembleState.from_matrix(shifted, center.grid, center.time)


def enkf_analysis(
    forecast: EnsembleState,
    obs: ObsSet | ObsEntry,
    r: ObsCov,
    *,
    inflation: float = 1.0,
    localization: float | None = None,
    seed: int = 0,
    model: DynamicsModel | None = None,
) -> EnsembleState:
    """Stochastic EnKF update at the ensemble time.

    Anomalies are inflated by `inflation` about the mean; the gain uses the
    sample covariances, Schur-multiplied by a Gaspari-Cohn taper of
    horizontal distance when `localization` is set; each member assimilates
    observations perturbed with N(0, R) draws that are centred over the
    members, so the mean update uses the unperturbed innovation.

    Raises:
        EnsembleSizeError: Fewer than two members.
        WindowError: Observations before the ensemble time, or after it
            without a model.
        NumericalError: Singular innovation covariance.
    """
    if forecast.size < 2:
        raise EnsembleSizeError(f"Ensemble needs at least 2 members, got {forecast.size}")
    if inflation < 1.0:
        raise ValueError(f"Inflation must be >= 1, got {inflation}")
    grid = forecast.grid
    t0 = forecast.time
    n = forecast.size

    matrix = forecast.as_matrix()
    mean = matrix.mean(axis=1, keepdims=True)
    anomalies = inflation * (matrix - mean)
    inflated = mean + anomalies

    entries = (obs,) if isinstance(obs, ObsEntry) else obs.entries
    entries = tuple(e for e in sorted(entries, key=lambda e: e.time) if e.n_obs)
    if not entries:
        return EnsembleState.from_matrix(inflated, grid, t0)

    obs_rows, values, variances, indices = [], [], [], []
    members = inflated
    current = t0
    for entry in entries:
        if entry.time < t0:
            raise WindowError(f"Observation at {entry.time} h precedes ensemble time {t0} h")
        if entry.time > current:
            if model is None:
                raise WindowError(f"Observation at {entry.time} h needs a model to reach")
            members = np.stack(
                [propagate_array(model, members[:, k], entry.time - current) for k in range(n)],
                axis=1,
            )
            current = entry.time
        operator = ObservationOperator.for_entry(grid, entry)
        obs_rows.append(members[operator.indices, :])
        values.append(observation_vector(grid, entry))
        variances.append(r.variances(operator))
        indices.append(operator.indices)

    hx = np.concatenate(obs_rows, axis=0)
    y = np.concatenate(values)
    obs_var = np.concatenate(variances)
    obs_index = np.concatenate(indices)

    hx_anom = hx - hx.mean(axis=1, keepdims=True)
    cross = anomalies @ hx_anom.T / (n - 1)
    obs_cov = hx_anom @ hx_anom.T / (n - 1)
    if localization is not None:
        cross = cross * gaspari_cohn(
            horizontal_distance(grid, np.arange(grid.size), obs_index), localization
        )
        obs_cov = obs_cov * gaspari_cohn(
            horizontal_distance(grid, obs_index, obs_index), localization
        )

    rng = keyed_generator(seed, ENSEMBLE_STREAM, 1, t0)
    noise = rng.standard_normal((y.size, n))
    noise = (noise - noise.mean(axis=1, keepdims=True)) * np.sqrt(n / (n - 1))
    perturbed = y[:, None] + np.sqrt(obs_var)[:, None] * noise
    innovation_cov = obs_cov + np.diag(obs_var)
    increments = cross @ spd_solve(innovation_cov, perturbed - hx)
    logger.debug(f"EnKF update with {n} members and {y.size} observations at t={t0}")
    return EnsembleState.from_matrix(inflated + increments, grid, t0)
