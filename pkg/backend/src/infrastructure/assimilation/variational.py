"""
Strong-constraint variational assimilation (3DVar / 4DVar).

J(x0) = 1/2 |x0 - x_b|^2_{B^-1} + 1/2 sum_k |y_k - H_k M_{t0->tk}(x0)|^2_{R^-1}

The observation term is propagated between observation times along the
greedy lead decomposition of each gap; its gradient is accumulated backwards
with the model adjoint. Minimization runs in control space,
x0 = x_b + B^{1/2} v, with scipy's limited-memory BFGS.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize

from src.domain.entities.analysis import AnalysisResult, SolverDiagnostics
from src.domain.entities.grid import GridSpec
from src.domain.entities.observations import ObsEntry, ObsSet
from src.domain.entities.state import FloatArray, StateField
from src.domain.exceptions import DimensionError, NumericalError, WindowError
from src.domain.value_objects.solver_exit import SolverExitReason
from src.infrastructure.dynamics.aggregation import greedy_decompose
from src.infrastructure.dynamics.base import DynamicsModel
from src.infrastructure.osse.operator import ObservationOperator, observation_vector

from .covariances import BackgroundCov, CovarianceOperator, ObsCov
from .kalman import spd_solve

logger = logging.getLogger(__name__)

Window = tuple[int, int]


@dataclass(frozen=True)
class SolverConfig:
    """Limited-memory BFGS settings."""

    max_iterations: int = 200
    tolerance: float = 1e-6
    memory: int = 10

    def __post_init__(self) -> None:
        if self.max_iterations < 1 or self.tolerance <= 0 or self.memory < 1:
            raise ValueError("Solver needs max_iterations >= 1, tolerance > 0, memory >= 1")


@dataclass(frozen=True, eq=False)
class _ObsTerm:
    time: int
    operator: ObservationOperator
    y: FloatArray
    inv_var: FloatArray


@dataclass(frozen=True, eq=False)
class ObservationWindow:
    """Observation terms of one window, ready for repeated cost evaluations."""

    grid: GridSpec
    start: int
    terms: tuple[_ObsTerm, ...] = field(default=())

    @classmethod
    def build(
        cls, grid: GridSpec, obs: ObsSet | ObsEntry, r: ObsCov, window: Window
    ) -> ObservationWindow:
        """Validate membership and resolve H, y and R^{-1} per time.

        Raises:
            WindowError: An observation time is outside [start, end).
            NumericalError: An observed slot has zero error variance.
        """
        start, end = window
        entries = (obs,) if isinstance(obs, ObsEntry) else obs.entries
        terms = []
        for entry in sorted(entries, key=lambda e: e.time):
            if not start <= entry.time < end:
                raise WindowError(
                    f"Observation time {entry.time} outside window [{start}, {end})"
                )
            if entry.n_obs == 0:
                continue
            operator = ObservationOperator.for_entry(grid, entry)
            variances = r.variances(operator)
            if np.any(variances <= 0):
                raise NumericalError(
                    "Zero observation error variance makes the variational cost singular"
                )
            terms.append(
                _ObsTerm(
                    time=entry.time,
                    operator=operator,
                    y=observation_vector(grid, entry),
                    inv_var=1.0 / variances,
                )
            )
        return cls(grid=grid, start=start, terms=tuple(terms))

    @property
    def needs_model(self) -> bool:
        return any(term.time != self.start for term in self.terms)

    def _segments(self, model: DynamicsModel | None) -> list[list[int]]:
        segments = []
        previous = self.start
        for term in self.terms:
            gap = term.time - previous
            if gap == 0:
                segments.append([])
            else:
                if model is None:
                    raise WindowError(
                        f"Observation at {term.time} h needs a model to reach from {previous} h"
                    )
                segments.append(list(greedy_decompose(gap, model.supported_leads).steps))
            previous = term.time
        return segments

    def innovations(
        self, x0: FloatArray, model: DynamicsModel | None
    ) -> list[tuple[_ObsTerm, FloatArray]]:
        """y_k - H_k M_{t0->tk}(x0) for every observation time, in time order."""
        out = []
        x = x0
        for term, steps in zip(self.terms, self._segments(model), strict=True):
            for lead in steps:
                x = model.step_array(x, lead)  # type: ignore[union-attr]
            out.append((term, term.y - term.operator.apply(x)))
        return out

    def cost(self, x0: FloatArray, model: DynamicsModel | None) -> float:
        """Observation term 1/2 sum_k |y_k - H_k x_k|^2_{R^-1}."""
        return float(
            sum(0.5 * np.sum(d * d * term.inv_var) for term, d in self.innovations(x0, model))
        )

    def cost_and_gradient(
        self, x0: FloatArray, model: DynamicsModel | None
    ) -> tuple[float, FloatArray]:
        """Observation term and its gradient with respect to x0."""
        segments = self._segments(model)
        bases: list[list[tuple[FloatArray, int]]] = []
        residuals: list[FloatArray] = []
        total = 0.0
        x = x0
        for term, steps in zip(self.terms, segments, strict=True):
            segment = []
            for lead in steps:
                segment.append((x, lead))
                x = model.step_array(x, lead)  # type: ignore[union-attr]
            bases.append(segment)
            d = term.y - term.operator.apply(x)
            residuals.append(d)
            total += 0.5 * float(np.sum(d * d * term.inv_var))

        adj = np.zeros_like(x0, dtype=np.float64)
        for term, segment, d in zip(
            reversed(self.terms), reversed(bases), reversed(residuals), strict=True
        ):
            adj = adj - term.operator.adjoint(term.inv_var * d)
            for base, lead in reversed(segment):
                adj = model.adjoint_array(base, adj, lead)  # type: ignore[union-attr]
        return total, adj


def _background_term(
    x0: FloatArray, x_b: FloatArray, b: CovarianceOperator | None
) -> tuple[float, FloatArray]:
    if b is None:
        return 0.0, np.zeros_like(x0)
    dx = x0 - x_b
    b_inv_dx = b.inv_apply(dx)
    return 0.5 * float(dx @ b_inv_dx), b_inv_dx


def _check_pair(x0: StateField, x_b: StateField) -> None:
    if x0.grid != x_b.grid:
        raise DimensionError("x0 and x_b must share one grid.")


def cost_4dvar(
    x0: StateField,
    x_b: StateField,
    b: CovarianceOperator | None,
    obs: ObsSet | ObsEntry,
    r: ObsCov,
    model: DynamicsModel | None,
    window: Window,
) -> float:
    """Strong-constraint 4DVar cost; b=None drops the background term.

    Raises:
        WindowError: Observations outside the window.
    """
    _check_pair(x0, x_b)
    terms = ObservationWindow.build(x0.grid, obs, r, window)
    x = x0.values.ravel()
    jb, _ = _background_term(x, x_b.values.ravel(), b)
    return jb + terms.cost(x, model)


def grad_4dvar(
    x0: StateField,
    x_b: StateField,
    b: CovarianceOperator | None,
    obs: ObsSet | ObsEntry,
    r: ObsCov,
    model: DynamicsModel | None,
    window: Window,
) -> StateField:
    """B^-1 (x0 - x_b) - sum_k M_k^T H_k^T R^-1 (y_k - H_k M_k x0)."""
    _check_pair(x0, x_b)
    terms = ObservationWindow.build(x0.grid, obs, r, window)
    x = x0.values.ravel()
    _, gb = _background_term(x, x_b.values.ravel(), b)
    _, go = terms.cost_and_gradient(x, model)
    return x0.with_values((gb + go).reshape(x0.grid.shape))


def minimize_4dvar(
    x_b: StateField,
    b: CovarianceOperator,
    obs: ObsSet | ObsEntry,
    r: ObsCov,
    model: DynamicsModel | None,
    window: Window,
    solver: SolverConfig | None = None,
) -> AnalysisResult:
    """Minimize the 4DVar cost from x0 = x_b.

    Terminates when |grad J| / |grad J_0| < tolerance (control space) or after
    max_iterations. If the final cost is above J(x_b) the background is
    returned with exit reason "stalled".
    """
    solver = solver or SolverConfig()
    grid = x_b.grid
    terms = ObservationWindow.build(grid, obs, r, window)
    xb = x_b.values.ravel()
    n_control = b.control_size

    def control_cost(v: FloatArray) -> tuple[float, FloatArray]:
        x0 = xb + b.sqrt_apply(v)
        jo, go = terms.cost_and_gradient(x0, model)
        return 0.5 * float(v @ v) + jo, v + b.sqrt_adjoint(go)

    v0 = np.zeros(n_control)
    j0, g0 = control_cost(v0)
    g0_norm = float(np.linalg.norm(g0))
    costs = [j0]
    grad_norms = [g0_norm]

    if g0_norm == 0.0 or not terms.terms:
        return AnalysisResult(
            analysis=x_b,
            diagnostics=SolverDiagnostics(
                costs=tuple(costs),
                grad_norms=tuple(grad_norms),
                iterations=0,
                exit_reason=SolverExitReason.CONVERGED,
            ),
        )

    cache: dict[bytes, tuple[float, FloatArray]] = {}

    def fun(v: FloatArray) -> tuple[float, FloatArray]:
        key = v.tobytes()
        if key not in cache:
            if len(cache) > 8:
                cache.clear()
            cache[key] = control_cost(v)
        return cache[key]

    converged = False

    def callback(intermediate_result: object) -> None:
        nonlocal converged
        v = np.asarray(intermediate_result.x)  # type: ignore[attr-defined]
        j, g = fun(v)
        costs.append(j)
        grad_norms.append(float(np.linalg.norm(g)))
        logger.debug(f"4DVar iteration {len(costs) - 1}: J={j:.6e} |g|={grad_norms[-1]:.3e}")
        if grad_norms[-1] / g0_norm < solver.tolerance:
            converged = True
            raise StopIteration

    result = minimize(
        fun,
        v0,
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options={
            "maxcor": solver.memory,
            "maxiter": solver.max_iterations,
            "ftol": 0.0,
            "gtol": 0.0,
        },
    )
    v_final = np.asarray(result.x)
    j_final, g_final = fun(v_final)
    iterations = len(costs) - 1

    if converged or float(np.linalg.norm(g_final)) / g0_norm < solver.tolerance:
        reason = SolverExitReason.CONVERGED
    elif iterations >= solver.max_iterations:
        reason = SolverExitReason.MAX_ITERATIONS
    else:
        reason = SolverExitReason.STALLED

    if not j_final <= j0:
        logger.warning(f"4DVar ended above the background cost ({j_final} > {j0}); keeping x_b")
        v_final, j_final, reason = v0, j0, SolverExitReason.STALLED

    analysis = x_b.with_values((xb + b.sqrt_apply(v_final)).reshape(grid.shape))
    return AnalysisResult(
        analysis=analysis,
        diagnostics=SolverDiagnostics(
            costs=tuple(costs),
            grad_norms=tuple(grad_norms),
            iterations=iterations,
            exit_reason=reason,
            extra={"final_cost": j_final},
        ),
    )


def _static_gain_increment(
    b: BackgroundCov, indices: NDArray[np.intp], innovation: FloatArray, obs_var: FloatArray
) -> FloatArray:
    """B H^T (H B H^T + R)^{-1} d for point observations at flat `indices`."""
    columns = b.columns(indices)
    return columns @ spd_solve(columns[indices, :] + np.diag(obs_var), innovation)


def _closed_form_result(
    x_b: StateField, xa: FloatArray, innovation: FloatArray, obs_var: FloatArray, **extra: float
) -> AnalysisResult:
    with np.errstate(divide="ignore", invalid="ignore"):
        jo_b = 0.5 * float(np.sum(np.where(obs_var > 0, innovation**2 / obs_var, 0.0)))
    return AnalysisResult(
        analysis=x_b.with_values(xa.reshape(x_b.grid.shape)),
        diagnostics=SolverDiagnostics(
            costs=(jo_b,),
            iterations=0,
            exit_reason=SolverExitReason.CLOSED_FORM,
            extra={"n_obs": float(innovation.size), **extra},
        ),
    )


def threedvar(
    x_b: StateField,
    b: CovarianceOperator,
    obs_at_t0: ObsEntry,
    r: ObsCov,
    solver: SolverConfig | None = None,
) -> AnalysisResult:
    """Minimize 1/2 |x - x_b|^2_{B^-1} + 1/2 |y - Hx|^2_{R^-1}.

    A diagonal B uses the per-cell closed form
    x_a = x_b + sigma_b^2 / (sigma_b^2 + sigma_o^2) (y - x_b); a correlated
    static B uses x_a = x_b + B H^T (H B H^T + R)^{-1} (y - H x_b); any other
    operator goes through the variational minimizer.
    """
    grid = x_b.grid
    if obs_at_t0.time != x_b.time:
        raise WindowError(
            f"3DVar observations at {obs_at_t0.time} h do not match the background time {x_b.time} h"
        )
    if not isinstance(b, BackgroundCov):
        return minimize_4dvar(x_b, b, obs_at_t0, r, None, (x_b.time, x_b.time + 1), solver)

    operator = ObservationOperator.for_entry(grid, obs_at_t0)
    xb = x_b.values.ravel()
    innovation = observation_vector(grid, obs_at_t0) - xb[operator.indices]
    obs_var = r.variances(operator)
    if not b.is_diagonal:
        xa = xb + _static_gain_increment(b, operator.indices, innovation, obs_var)
        return _closed_form_result(x_b, xa, innovation, obs_var)

    bg_var = b.diagonal[operator.indices]
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = np.where(obs_var == 0.0, 1.0, 1.0 / (1.0 + obs_var / bg_var))
    xa = xb.copy()
    xa[operator.indices] = xb[operator.indices] + gain * innovation
    return _closed_form_result(
        x_b, xa, innovation, obs_var, mean_gain=float(gain.mean()) if gain.size else 0.0
    )


def fgat_threedvar(
    x_b: StateField,
    b: BackgroundCov,
    obs: ObsSet,
    r: ObsCov,
    model: DynamicsModel,
    window: Window,
) -> AnalysisResult:
    """3DVar at the window start with innovations taken at each observation time.

    Innovations y_k - H_k M_{t0->tk}(x_b) come from the background trajectory;
    the increment is not propagated, so every observation acts on x_b at t0
    through the static gain.

    Raises:
        WindowError: Observations outside the window.
        NumericalError: An observed slot has zero error variance.
    """
    terms = ObservationWindow.build(x_b.grid, obs, r, window)
    xb = x_b.values.ravel()
    pairs = terms.innovations(xb, model)
    if not pairs:
        return AnalysisResult(
            analysis=x_b,
            diagnostics=SolverDiagnostics(exit_reason=SolverExitReason.PASSTHROUGH),
        )
    indices = np.concatenate([term.operator.indices for term, _ in pairs])
    innovation = np.concatenate([d for _, d in pairs])
    obs_var = np.concatenate([1.0 / term.inv_var for term, _ in pairs])
    xa = xb + _static_gain_increment(b, indices, innovation, obs_var)
    return _closed_form_result(x_b, xa, innovation, obs_var, n_times=float(len(pairs)))
