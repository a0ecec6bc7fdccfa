"""
Unit tests for the 3DVar and 4DVar solvers.
"""

import numpy as np
import pytest

from src.domain.entities.grid import SURFACE
from src.domain.entities.observations import ObsErrorTable, ObsSet
from src.domain.exceptions import NumericalError, WindowError
from src.domain.value_objects import SolverExitReason
from src.infrastructure.assimilation import (
    BackgroundCov,
    ObsCov,
    SolverConfig,
    cost_4dvar,
    fgat_threedvar,
    grad_4dvar,
    kf_analysis,
    minimize_4dvar,
    threedvar,
)
from src.infrastructure.osse import ObservationOperator, observation_vector, run_truth


def _rmse(a, b):
    return float(np.sqrt(np.mean((a.values - b.values) ** 2)))


@pytest.fixture
def background(lorenz_state, rng):
    return lorenz_state.with_values(lorenz_state.values + rng.standard_normal(lorenz_state.values.shape))


class TestThreeDVar:
    """Tests for threedvar."""

    def test_equal_variances_average_background_and_obs(self, lorenz_state, background, lorenz_b, ring_r, ring_entry):
        entry = ring_entry(lorenz_state, observed=range(0, 40, 2))
        result = threedvar(background, lorenz_b, entry, ring_r)
        xa, xb, xt = (s.values.ravel() for s in (result.analysis, background, lorenz_state))
        np.testing.assert_allclose(xa[::2], 0.5 * (xb[::2] + xt[::2]))
        np.testing.assert_array_equal(xa[1::2], xb[1::2])
        assert result.diagnostics.exit_reason is SolverExitReason.CLOSED_FORM

    def test_zero_obs_error_copies_observations(self, lorenz_state, background, lorenz_b, ring_entry):
        r = ObsCov(ObsErrorTable(sigmas={("x", SURFACE): 0.0}))
        result = threedvar(background, lorenz_b, ring_entry(lorenz_state), r)
        np.testing.assert_allclose(result.analysis.values, lorenz_state.values)

    def test_time_mismatch_raises(self, lorenz_state, background, lorenz_b, ring_r, ring_entry):
        entry = ring_entry(lorenz_state.at_time(3))
        with pytest.raises(WindowError):
            threedvar(background, lorenz_b, entry, ring_r)

    def test_closed_form_matches_minimizer(self, lorenz, lorenz_state, background, lorenz_b, ring_r, ring_entry):
        entry = ring_entry(lorenz_state, observed=range(0, 40, 3), noise=1.0)
        closed = threedvar(background, lorenz_b, entry, ring_r).analysis
        iterative = minimize_4dvar(
            background, lorenz_b, entry, ring_r, lorenz, (0, 12), SolverConfig(tolerance=1e-10)
        ).analysis
        np.testing.assert_allclose(iterative.values, closed.values, atol=1e-6)


    def test_correlated_b_matches_kalman_update(self, lorenz, lorenz_state, background, ring_r, ring_entry):
        b = BackgroundCov.uniform(lorenz.grid, 1.5, correlation_length=3.0)
        entry = ring_entry(lorenz_state, observed=range(0, 40, 4), noise=1.0)
        result = threedvar(background, b, entry, ring_r)
        operator = ObservationOperator.for_entry(lorenz.grid, entry)
        y = observation_vector(lorenz.grid, entry)
        expected, _, _ = kf_analysis(
            background.values.ravel(), b.dense(), y, operator, ring_r.variances(operator)
        )
        np.testing.assert_allclose(result.analysis.values.ravel(), expected, atol=1e-10)
        assert result.diagnostics.exit_reason is SolverExitReason.CLOSED_FORM
        assert not np.allclose(result.analysis.values.ravel()[1], background.values.ravel()[1])


class TestFGAT:
    """Tests for fgat_threedvar."""

    def test_window_start_obs_match_threedvar(self, lorenz, lorenz_state, background, ring_r, ring_entry):
        b = BackgroundCov.uniform(lorenz.grid, 1.0, correlation_length=2.0)
        entry = ring_entry(lorenz_state, observed=range(0, 40, 5), noise=1.0)
        fgat = fgat_threedvar(background, b, ObsSet(entries=(entry,)), ring_r, lorenz, (0, 12))
        direct = threedvar(background, b, entry, ring_r)
        np.testing.assert_allclose(fgat.analysis.values, direct.analysis.values, atol=1e-10)

    def test_later_innovations_come_from_background_trajectory(
        self, lorenz, lorenz_state, background, lorenz_b, ring_r, ring_entry
    ):
        later = run_truth(lorenz, lorenz_state, 6, 3)
        obs = ObsSet(cadence=3, entries=(ring_entry(later[2], observed=[0, 1, 2]),))
        result = fgat_threedvar(background, lorenz_b, obs, ring_r, lorenz, (0, 12))
        innovation = later[2].values - lorenz.step(background, 6).values
        expected = background.values.ravel().copy()
        expected[:3] += 0.5 * innovation.ravel()[:3]
        np.testing.assert_allclose(result.analysis.values.ravel(), expected, atol=1e-10)
        assert result.analysis.time == 0
        assert result.diagnostics.extra["n_obs"] == 3.0

    def test_empty_window_passes_through(self, lorenz, background, lorenz_b, ring_r):
        result = fgat_threedvar(background, lorenz_b, ObsSet(), ring_r, lorenz, (0, 12))
        assert result.analysis == background
        assert result.diagnostics.exit_reason is SolverExitReason.PASSTHROUGH


class TestFourDVar:
    """Tests for the 4DVar cost, gradient and minimizer."""

    @pytest.fixture
    def window_obs(self, lorenz, lorenz_state, ring_entry):
        truth = run_truth(lorenz, lorenz_state, 9, 3)
        return truth, ObsSet(cadence=3, entries=tuple(ring_entry(s, noise=1.0) for s in truth))

    def test_gradient_matches_finite_difference(self, lorenz, background, lorenz_b, ring_r, window_obs):
        _, obs = window_obs
        window = (0, 12)
        x0 = background.with_values(background.values + 0.3)
        grad = grad_4dvar(x0, background, lorenz_b, obs, ring_r, lorenz, window).values
        direction = grad / np.linalg.norm(grad)
        eps = 1e-5
        plus = x0.with_values(x0.values + eps * direction)
        minus = x0.with_values(x0.values - eps * direction)
        fd = (
            cost_4dvar(plus, background, lorenz_b, obs, ring_r, lorenz, window)
            - cost_4dvar(minus, background, lorenz_b, obs, ring_r, lorenz, window)
        ) / (2 * eps)
        assert fd == pytest.approx(np.linalg.norm(grad), rel=1e-6)

    def test_cost_at_background_has_no_background_term(self, lorenz, lorenz_state, lorenz_b, ring_r, window_obs):
        truth, obs = window_obs
        with_b = cost_4dvar(truth[0], truth[0], lorenz_b, obs, ring_r, lorenz, (0, 12))
        without_b = cost_4dvar(truth[0], truth[0], None, obs, ring_r, lorenz, (0, 12))
        assert with_b == pytest.approx(without_b)
        assert with_b > 0

    def test_minimizer_moves_towards_truth(self, lorenz, background, lorenz_b, ring_r, window_obs):
        truth, obs = window_obs
        result = minimize_4dvar(background, lorenz_b, obs, ring_r, lorenz, (0, 12))
        costs = result.diagnostics.costs
        assert costs[-1] < costs[0]
        assert result.diagnostics.exit_reason in (SolverExitReason.CONVERGED, SolverExitReason.MAX_ITERATIONS)
        assert _rmse(result.analysis, truth[0]) < _rmse(background, truth[0])
        assert result.analysis.time == background.time

    def test_empty_window_returns_background(self, lorenz, background, lorenz_b, ring_r):
        result = minimize_4dvar(background, lorenz_b, ObsSet(), ring_r, lorenz, (0, 12))
        assert result.analysis == background
        assert result.diagnostics.iterations == 0

    def test_observation_outside_window(self, lorenz, lorenz_state, lorenz_b, ring_r, ring_entry):
        obs = ObsSet(entries=(ring_entry(lorenz_state.at_time(12)),))
        with pytest.raises(WindowError):
            cost_4dvar(lorenz_state, lorenz_state, lorenz_b, obs, ring_r, lorenz, (0, 12))

    def test_later_observation_needs_model(self, lorenz_state, lorenz_b, ring_r, ring_entry):
        obs = ObsSet(entries=(ring_entry(lorenz_state.at_time(3)),))
        with pytest.raises(WindowError, match="model"):
            cost_4dvar(lorenz_state, lorenz_state, lorenz_b, obs, ring_r, None, (0, 12))

    def test_zero_error_variance_is_singular(self, lorenz, lorenz_state, lorenz_b, ring_entry):
        r = ObsCov(ObsErrorTable(sigmas={("x", SURFACE): 0.0}))
        with pytest.raises(NumericalError):
            minimize_4dvar(lorenz_state, lorenz_b, ring_entry(lorenz_state), r, lorenz, (0, 12))

    def test_hybrid_covariance_uses_minimizer(self, lorenz_state, background, lorenz_b, ring_r, ring_entry, rng):
        hybrid = lorenz_b.hybridized(0.5 * rng.standard_normal((40, 5)), 0.5)
        result = threedvar(background, hybrid, ring_entry(lorenz_state), ring_r)
        assert result.diagnostics.exit_reason is not SolverExitReason.CLOSED_FORM
        assert _rmse(result.analysis, lorenz_state) < _rmse(background, lorenz_state)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(max_iterations=0)
    with pytest.raises(ValueError):
        SolverConfig(tolerance=0.0)


def test_background_only_cost(ring_grid, random_state, ring_r):
    b = BackgroundCov.uniform(ring_grid, 4.0)
    x_b = random_state(ring_grid)
    x0 = x_b.with_values(x_b.values + 2.0)
    # 1/2 * 40 cells * 2^2 / 4
    assert cost_4dvar(x0, x_b, b, ObsSet(), ring_r, None, (0, 12)) == pytest.approx(20.0)
