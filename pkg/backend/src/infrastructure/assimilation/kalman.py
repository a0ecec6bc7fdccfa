"""
Kalman filter forecast and analysis steps on dense covariances.

Intended for linear models or small state dimensions where M and P can be
materialized.
"""

from __future__ import annotations

import logging
from typing import overload

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src.domain.entities.state import FloatArray, StateField
from src.domain.exceptions import DimensionError, NumericalError
from src.infrastructure.dynamics.base import DynamicsModel
from src.infrastructure.osse.operator import ObservationOperator

logger = logging.getLogger(__name__)

JITTER_FACTOR = 1e-10
_DENSE_WARN_SIZE = 4096


def spd_solve(matrix: FloatArray, rhs: FloatArray) -> FloatArray:
    """Solve S z = rhs for symmetric positive definite S.

    A failed Cholesky factorization is retried once with
    JITTER_FACTOR * trace(S) / n added to the diagonal.

    Raises:
        NumericalError: S is still not positive definite; carries cond(S).
    """
    try:
        return cho_solve(cho_factor(matrix, lower=True), rhs)
    except LinAlgError:
        n = matrix.shape[0]
        jitter = JITTER_FACTOR * float(np.trace(matrix)) / max(n, 1)
        logger.warning(f"Cholesky failed; retrying with diagonal jitter {jitter:.3e}")
        try:
            if not jitter > 0:
                raise LinAlgError("non-positive jitter")
            return cho_solve(cho_factor(matrix + jitter * np.eye(n), lower=True), rhs)
        except LinAlgError as exc:
            condition = float(np.linalg.cond(matrix))
            raise NumericalError(
                f"Innovation covariance is singular (condition number {condition:.3e})",
                condition=condition,
            ) from exc


@overload
def kf_forecast(
    x_a: StateField, p_a: FloatArray, model: DynamicsModel | FloatArray, lead: int, q: FloatArray | None = None
) -> tuple[StateField, FloatArray]: ...


@overload
def kf_forecast(
    x_a: FloatArray, p_a: FloatArray, model: FloatArray, lead: int, q: FloatArray | None = None
) -> tuple[FloatArray, FloatArray]: ...


def kf_forecast(
    x_a: StateField | FloatArray,
    p_a: FloatArray,
    model: DynamicsModel | FloatArray,
    lead: int,
    q: FloatArray | None = None,
) -> tuple[StateField | FloatArray, FloatArray]:
    """x^f = M x^a; P^f = M P^a M^T + Q.

    `model` is either a DynamicsModel (its tangent is materialized at x^a) or
    an explicit m x m matrix M.
    """
    p_a = np.asarray(p_a, dtype=np.float64)
    if isinstance(model, DynamicsModel):
        if not isinstance(x_a, StateField):
            raise TypeError("A DynamicsModel forecast needs a StateField analysis")
        if model.grid.size > _DENSE_WARN_SIZE:
            logger.warning(f"Materializing a {model.grid.size}^2 tangent matrix")
        m_matrix = model.tangent_matrix(x_a, lead)
        x_f: StateField | FloatArray = model.step(x_a, lead)
    else:
        m_matrix = np.asarray(model, dtype=np.float64)
        if isinstance(x_a, StateField):
            values = m_matrix @ x_a.values.ravel()
            x_f = StateField(grid=x_a.grid, values=values.reshape(x_a.grid.shape), time=x_a.time + lead)
        else:
            x_f = m_matrix @ np.asarray(x_a, dtype=np.float64)
    if p_a.shape != (m_matrix.shape[1], m_matrix.shape[1]):
        raise DimensionError(f"P^a shape {p_a.shape} does not match M {m_matrix.shape}")
    p_f = m_matrix @ p_a @ m_matrix.T
    if q is not None:
        p_f = p_f + np.asarray(q, dtype=np.float64)
    return x_f, p_f


def kf_analysis(
    x_f: StateField | FloatArray,
    p_f: FloatArray,
    y: FloatArray,
    h: ObservationOperator | FloatArray,
    r: FloatArray,
) -> tuple[StateField | FloatArray, FloatArray, FloatArray]:
    """Kalman update.

    K = P^f H^T (H P^f H^T + R)^-1; x^a = x^f + K (y - H x^f);
    P^a = (I - K H) P^f, symmetrized. `r` may be a p x p matrix or a vector
    of variances.

    Raises:
        NumericalError: Singular innovation covariance.
    """
    xf = x_f.values.ravel() if isinstance(x_f, StateField) else np.asarray(x_f, dtype=np.float64)
    p_f = np.asarray(p_f, dtype=np.float64)
    h_matrix = h.matrix() if isinstance(h, ObservationOperator) else np.atleast_2d(np.asarray(h, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    r = np.asarray(r, dtype=np.float64)
    r_matrix = np.diag(r) if r.ndim == 1 else np.atleast_2d(r)
    if h_matrix.shape != (y.size, xf.size):
        raise DimensionError(f"H shape {h_matrix.shape} does not match y ({y.size}) and x ({xf.size})")

    ph_t = p_f @ h_matrix.T
    innovation_cov = h_matrix @ ph_t + r_matrix
    gain = spd_solve(innovation_cov, ph_t.T).T
    xa = xf + gain @ (y - h_matrix @ xf)
    p_a = (np.eye(xf.size) - gain @ h_matrix) @ p_f
    p_a = 0.5 * (p_a + p_a.T)

    if isinstance(x_f, StateField):
        return x_f.with_values(xa.reshape(x_f.grid.shape)), p_a, gain
    return xa, p_a, gain
