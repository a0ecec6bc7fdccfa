"""
Fitting and applying the pointwise linear increment regressor.

The fit is a latitude-weighted least-squares problem over every (sample,
cell) pair, on standardized feature columns. In innovation form the
background and observation channels of a slot share one coefficient with
opposite signs, so the map acts on observation-minus-background. A
rank-deficient design falls back to ridge regression with
lambda = RIDGE_FACTOR * trace(A^T W A) / p.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from scipy.linalg import lstsq, solve

from src.domain.entities.analysis import AnalysisResult, SolverDiagnostics
from src.domain.entities.regressor import FEATURE_KINDS, IncrementRegressor
from src.domain.entities.state import FloatArray, StateField
from src.domain.entities.statistics import NormStats
from src.domain.services.fields import latitude_weights
from src.domain.value_objects.solver_exit import SolverExitReason

from .features import TrainingSample, build_features, sample_features

logger = logging.getLogger(__name__)

MIN_TRAINING_CELLS = 100
RIDGE_FACTOR = 1e-8


def _cell_weights(samples: Sequence[TrainingSample]) -> FloatArray:
    grid = samples[0].background.grid
    per_cell = np.repeat(latitude_weights(grid), grid.n_lon)
    return np.tile(per_cell, len(samples))


def _channel_basis(n_slots: int, innovation_form: bool) -> FloatArray:
    """(4*S, k) map from fitted channels to the full feature layout."""
    if not innovation_form:
        return np.eye(len(FEATURE_KINDS) * n_slots)
    basis = np.zeros((len(FEATURE_KINDS) * n_slots, 3 * n_slots))
    for s in range(n_slots):
        basis[s, s] = -1.0
        basis[n_slots + s, s] = 1.0
        basis[2 * n_slots + s, n_slots + s] = 1.0
        basis[3 * n_slots + s, 2 * n_slots + s] = 1.0
    return basis


def fit_increment_regressor(
    samples: Sequence[TrainingSample],
    stats: NormStats | None = None,
    *,
    innovation_form: bool = True,
) -> IncrementRegressor:
    """Latitude-weighted least-squares fit of the increment map.

    Raises:
        ValueError: Fewer than MIN_TRAINING_CELLS pooled training cells.
    """
    if not samples:
        raise ValueError("Regressor training needs at least one sample.")
    grid = samples[0].background.grid
    stats = stats or NormStats.identity(grid.variable_names)
    slot_labels = tuple(s.label for s in grid.slots())
    n_slots = len(slot_labels)

    features, targets = sample_features(samples, stats)
    basis = _channel_basis(n_slots, innovation_form)
    channels = basis.T @ features
    n_rows = features.shape[1]
    if n_rows < MIN_TRAINING_CELLS:
        raise ValueError(
            f"Regressor training needs >= {MIN_TRAINING_CELLS} cells, got {n_rows}"
        )
    weights = _cell_weights(samples)
    sqrt_w = np.sqrt(weights)

    centers = channels.mean(axis=1)
    scales = channels.std(axis=1)
    varying = scales > 0
    standardized = (channels[varying] - centers[varying, None]) / scales[varying, None]
    design = np.vstack([standardized, np.ones(n_rows)]).T
    weighted_design = design * sqrt_w[:, None]
    weighted_targets = targets.T * sqrt_w[:, None]

    solution, _, _, _ = lstsq(weighted_design, weighted_targets)
    rank = int(np.linalg.matrix_rank(weighted_design))
    fallback = rank < design.shape[1]
    if fallback:
        normal = weighted_design.T @ weighted_design
        lam = RIDGE_FACTOR * float(np.trace(normal)) / normal.shape[0]
        logger.warning(f"Rank-deficient regressor design (rank {rank}); ridge lambda={lam:.3e}")
        solution = solve(
            normal + lam * np.eye(normal.shape[0]),
            weighted_design.T @ weighted_targets,
            assume_a="pos",
        )

    beta = solution[:-1].T
    intercept = solution[-1]
    reduced = np.zeros((n_slots, channels.shape[0]))
    reduced[:, varying] = beta / scales[varying]
    coefficients = reduced @ basis.T
    bias = intercept - beta @ (centers[varying] / scales[varying])

    fitted = coefficients @ features + bias[:, None]
    residual = targets - fitted
    metadata = {
        "n_samples": len(samples),
        "n_cells": int(n_rows),
        "ridge_fallback": bool(fallback),
        "innovation_form": bool(innovation_form),
        "train_l2": float(np.mean(weights * residual**2)),
        "train_l1": float(np.mean(weights * np.abs(residual))),
        "zero_l2": float(np.mean(weights * targets**2)),
        "zero_l1": float(np.mean(weights * np.abs(targets))),
    }
    logger.info(
        f"Fitted increment regressor on {n_rows} cells: "
        f"weighted L2 {metadata['train_l2']:.4e} (zero map {metadata['zero_l2']:.4e})"
    )
    return IncrementRegressor(
        slot_labels=slot_labels, coefficients=coefficients, bias=bias, metadata=metadata
    )


def apply_regressor(
    reg: IncrementRegressor,
    x_b: StateField,
    obs_filled: StateField,
    mask: StateField,
    grad_feature: StateField,
    stats: NormStats | None = None,
) -> AnalysisResult:
    """x^a = x_b + predicted increment on every active slot."""
    grid = x_b.grid
    stats = stats or NormStats.identity(grid.variable_names)
    features = build_features(x_b, obs_filled, mask, grad_feature, stats)
    increment = reg.predict(features)
    values = np.array(x_b.values)
    for row, slot in enumerate(grid.slots()):
        cells = increment[row].reshape(grid.n_lat, grid.n_lon) * stats.stds[slot.variable]
        values[slot.var_index, slot.level_index] += cells
    return AnalysisResult(
        analysis=x_b.with_values(values),
        diagnostics=SolverDiagnostics(
            exit_reason=SolverExitReason.CLOSED_FORM,
            extra={"mean_abs_increment": float(np.mean(np.abs(values - x_b.values)))},
        ),
    )
