"""
Unit tests for analysis strategies, background estimation and training pairs.
"""

import numpy as np
import pytest

from src.domain.entities.grid import SURFACE
from src.domain.entities.observations import MaskSpec, ObsErrorTable, ObsSet
from src.domain.entities.regressor import IncrementRegressor
from src.domain.exceptions import CycleInitializationError, DegenerateStatisticsError
from src.domain.value_objects import DAMethod, SolverExitReason
from src.infrastructure.assimilation import (
    AnalysisContext,
    build_strategy,
    build_training_samples,
    estimate_background_cov,
    training_backgrounds,
)
from src.infrastructure.osse import run_truth, simulate_observations


@pytest.fixture
def context(lorenz, lorenz_b, ring_r):
    return AnalysisContext(model=lorenz, b=lorenz_b, r=ring_r, ensemble_size=5, seed=3)


@pytest.fixture
def truth(lorenz, lorenz_state):
    return run_truth(lorenz, lorenz_state, 72, 3)


class TestStrategies:
    """Tests for build_strategy and the strategy classes."""

    def test_free_run_passes_background_through(self, context, lorenz_state):
        result = build_strategy(DAMethod.NONE, context).analyze(lorenz_state, ObsSet(), (0, 12))
        assert result.analysis == lorenz_state
        assert result.diagnostics.exit_reason is SolverExitReason.PASSTHROUGH

    def test_threedvar_without_obs_passes_through(self, context, lorenz_state):
        result = build_strategy(DAMethod.THREEDVAR, context).analyze(lorenz_state, ObsSet(), (0, 12))
        assert result.analysis == lorenz_state
        assert result.diagnostics.exit_reason is SolverExitReason.PASSTHROUGH

    def test_threedvar_uses_later_window_obs(self, context, lorenz, truth, ring_entry):
        x_b = truth[0].with_values(truth[0].values + 1.0)
        obs = ObsSet(cadence=3, entries=(ring_entry(truth[1]),))
        result = build_strategy(DAMethod.THREEDVAR, context).analyze(x_b, obs, (0, 12))
        innovation = truth[1].values - lorenz.step(x_b, 3).values
        np.testing.assert_allclose(result.analysis.values, x_b.values + 0.5 * innovation, atol=1e-10)
        assert result.analysis.time == 0
        assert result.diagnostics.exit_reason is SolverExitReason.CLOSED_FORM
        assert result.diagnostics.extra["n_times"] == 1.0

    def test_regressor_needs_fitted_model(self, context):
        with pytest.raises(CycleInitializationError, match="training"):
            build_strategy(DAMethod.REGRESSOR, context)

    def test_zero_regressor_keeps_background(self, lorenz, lorenz_b, ring_r, lorenz_state, ring_entry):
        context = AnalysisContext(
            model=lorenz, b=lorenz_b, r=ring_r, regressor=IncrementRegressor.zeros(("x",))
        )
        obs = ObsSet(entries=(ring_entry(lorenz_state, noise=1.0),))
        result = build_strategy(DAMethod.REGRESSOR, context).analyze(lorenz_state, obs, (0, 12))
        np.testing.assert_allclose(result.analysis.values, lorenz_state.values)

    def test_enkf_carries_ensemble_between_cycles(self, context, lorenz, truth, ring_entry):
        strategy = build_strategy(DAMethod.ENKF, context)
        first = strategy.analyze(truth[0], ObsSet(entries=(ring_entry(truth[0], noise=1.0),)), (0, 12))
        assert first.ensemble is not None and first.ensemble.size == 5
        x_b = lorenz.step(first.analysis, 12)
        second = strategy.analyze(x_b, ObsSet(entries=(ring_entry(truth[4], noise=1.0),)), (12, 24))
        assert second.ensemble.time == 12
        assert second.analysis.time == 12

    def test_enkf_rejects_background_older_than_ensemble(self, context, truth, ring_entry):
        strategy = build_strategy(DAMethod.ENKF, context)
        strategy.analyze(truth[4], ObsSet(entries=(ring_entry(truth[4]),)), (12, 24))
        with pytest.raises(CycleInitializationError):
            strategy.analyze(truth[0], ObsSet(), (0, 12))

    def test_hybrid_recentres_ensemble_on_analysis(self, context, truth, ring_entry):
        strategy = build_strategy(DAMethod.HYBRID, context)
        x_b = truth[0].with_values(truth[0].values + 1.0)
        result = strategy.analyze(x_b, ObsSet(entries=(ring_entry(truth[0]),)), (0, 12))
        mean = result.ensemble.as_matrix().mean(axis=1)
        np.testing.assert_allclose(mean, result.analysis.values.ravel(), atol=1e-10)


class TestBackgroundEstimate:
    """Tests for estimate_background_cov."""

    def test_perfect_model_without_perturbation_is_degenerate(self, lorenz, truth):
        with pytest.raises(DegenerateStatisticsError, match="Zero forecast-error"):
            estimate_background_cov(lorenz, truth, perturbation_scale=0.0)

    def test_model_twin_gives_positive_variance(self, lorenz, truth):
        b = estimate_background_cov(lorenz.perturbed(forcing=8.5), truth, perturbation_scale=0.0)
        assert b.variances[("x", SURFACE)] > 0

    def test_variance_scale(self, lorenz, truth):
        base = estimate_background_cov(lorenz, truth, perturbation_scale=0.1, seed=1)
        scaled = estimate_background_cov(lorenz, truth, perturbation_scale=0.1, seed=1, variance_scale=2.0)
        key = ("x", SURFACE)
        assert scaled.variances[key] == pytest.approx(2.0 * base.variances[key])

    def test_correlation_length_is_carried(self, lorenz, truth):
        plain = estimate_background_cov(lorenz, truth, perturbation_scale=0.1, seed=1)
        correlated = estimate_background_cov(
            lorenz, truth, perturbation_scale=0.1, seed=1, correlation_length=2.0
        )
        assert plain.is_diagonal
        assert not correlated.is_diagonal
        assert correlated.variances == plain.variances
        assert correlated.to_dict()["correlation_length"] == 2.0

    def test_truth_shorter_than_lead(self, lorenz, truth):
        with pytest.raises(DegenerateStatisticsError):
            estimate_background_cov(lorenz, truth[:4], lead=24)


class TestTrainingPairs:
    """Tests for regressor training pairs."""

    def test_backgrounds_fall_on_window_starts(self, lorenz, truth):
        backgrounds = training_backgrounds(lorenz, truth, window_hours=12, seed=2)
        assert [b.time for b in backgrounds] == [24, 36, 48, 60, 72]

    def test_samples_need_observed_window(self, lorenz, truth, ring_r):
        table = ObsErrorTable(sigmas={("x", SURFACE): 1.0})
        obs = simulate_observations(truth, table, MaskSpec(masked_ratio=0.5, seed=1), cadence=3)
        backgrounds = training_backgrounds(lorenz, truth, window_hours=12, seed=2)
        samples = build_training_samples(lorenz, truth, obs, ring_r, backgrounds, window_hours=12)
        assert [s.background.time for s in samples] == [24, 36, 48, 60]
        assert samples[0].truth == truth[8]
        limited = build_training_samples(
            lorenz, truth, obs, ring_r, backgrounds, window_hours=12, max_samples=2
        )
        assert [s.background.time for s in limited] == [24, 48]
