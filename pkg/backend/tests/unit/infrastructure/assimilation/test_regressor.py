"""
Unit tests for regressor features, fitting and application.
"""

import numpy as np
import pytest

from src.domain.entities.regressor import IncrementRegressor
from src.domain.entities.state import StateField
from src.domain.entities.statistics import NormStats
from src.infrastructure.assimilation import (
    TrainingSample,
    apply_regressor,
    build_features,
    fit_increment_regressor,
    mask_filled_observations,
    mask_indicator,
    obs_term_gradient,
)


def _samples(grid, rng, count, *, duplicate_gradient=False, shrink=0.0):
    samples = []
    for t in range(count):
        background = StateField(grid=grid, values=rng.standard_normal(grid.shape), time=12 * t)
        obs = background.with_values(rng.standard_normal(grid.shape))
        mask = background.with_values((rng.random(grid.shape) < 0.5).astype(float))
        grad = mask if duplicate_gradient else background.with_values(rng.standard_normal(grid.shape))
        increment = 0.5 * (obs.values - background.values) + 0.1 - shrink * background.values
        truth = background.with_values(background.values + increment)
        samples.append(TrainingSample(background, obs, mask, grad, truth))
    return samples


class TestFeatures:
    """Tests for feature construction."""

    def test_mask_filled_observations(self, lorenz_state, ring_entry):
        background = lorenz_state.with_values(np.zeros(lorenz_state.values.shape))
        filled = mask_filled_observations(background, ring_entry(lorenz_state, observed=[1, 2]))
        flat = filled.values.ravel()
        np.testing.assert_array_equal(flat[[1, 2]], lorenz_state.values.ravel()[[1, 2]])
        assert np.count_nonzero(flat) == 2

    def test_mask_indicator(self, lorenz_state, ring_entry):
        indicator = mask_indicator(lorenz_state.grid, ring_entry(lorenz_state, observed=[5]), 0)
        assert indicator.values.sum() == 1.0
        assert mask_indicator(lorenz_state.grid, None, 0).values.sum() == 0.0

    def test_gradient_vanishes_for_perfect_observations(self, lorenz, lorenz_state, ring_r, ring_entry):
        grad = obs_term_gradient(lorenz_state, ring_entry(lorenz_state), ring_r, lorenz, (0, 12))
        np.testing.assert_allclose(grad.values, 0.0, atol=1e-12)

    def test_build_features_normalizes(self, latlon_grid, random_state):
        stats = NormStats(means={"z": 10.0, "t2m": 0.0}, stds={"z": 2.0, "t2m": 4.0})
        background = random_state(latlon_grid, offset=10.0)
        mask = background.with_values(latlon_grid.active_mask().astype(float))
        features = build_features(background, background, mask, background, stats)
        assert features.shape == (4 * 3, 32)
        np.testing.assert_allclose(features[0], (background.values[0, 0].ravel() - 10.0) / 2.0)
        np.testing.assert_array_equal(features[6:9], 1.0)
        np.testing.assert_allclose(features[11], background.values[1, 0].ravel() * 4.0)


class TestFit:
    """Tests for fit_increment_regressor."""

    def test_recovers_exact_linear_map(self, ring_grid, rng):
        regressor = fit_increment_regressor(_samples(ring_grid, rng, 5))
        assert regressor.coefficient("x", "observation") == pytest.approx(0.5, abs=1e-8)
        assert regressor.coefficient("x", "background") == pytest.approx(-0.5, abs=1e-8)
        assert regressor.coefficient("x", "mask") == pytest.approx(0.0, abs=1e-8)
        assert regressor.bias[0] == pytest.approx(0.1, abs=1e-8)
        assert regressor.metadata["train_l2"] < 1e-12
        assert not regressor.metadata["ridge_fallback"]
        assert regressor.metadata["n_cells"] == 200

    def test_too_few_cells(self, ring_grid, rng):
        with pytest.raises(ValueError, match="cells"):
            fit_increment_regressor(_samples(ring_grid, rng, 2))

    def test_duplicate_channel_falls_back_to_ridge(self, ring_grid, rng):
        regressor = fit_increment_regressor(_samples(ring_grid, rng, 5, duplicate_gradient=True))
        assert regressor.metadata["ridge_fallback"]
        assert regressor.metadata["train_l2"] < 1e-6

    def test_innovation_form_ties_background_to_observation(self, ring_grid, rng):
        regressor = fit_increment_regressor(_samples(ring_grid, rng, 5, shrink=0.3))
        assert regressor.metadata["innovation_form"]
        assert regressor.coefficient("x", "background") == pytest.approx(
            -regressor.coefficient("x", "observation"), abs=1e-12
        )
        assert regressor.metadata["train_l2"] > 1e-3

    def test_free_form_learns_background_shrink(self, ring_grid, rng):
        regressor = fit_increment_regressor(_samples(ring_grid, rng, 5, shrink=0.3), innovation_form=False)
        assert not regressor.metadata["innovation_form"]
        assert regressor.coefficient("x", "observation") == pytest.approx(0.5, abs=1e-8)
        assert regressor.coefficient("x", "background") == pytest.approx(-0.8, abs=1e-8)
        assert regressor.metadata["train_l2"] < 1e-12

    def test_no_samples(self):
        with pytest.raises(ValueError):
            fit_increment_regressor([])


class TestApply:
    """Tests for apply_regressor."""

    def test_zero_regressor_keeps_background(self, ring_grid, random_state):
        background = random_state(ring_grid)
        result = apply_regressor(IncrementRegressor.zeros(("x",)), background, background, background, background)
        assert result.analysis == background

    def test_fitted_regressor_reproduces_increment(self, ring_grid, rng):
        samples = _samples(ring_grid, rng, 5)
        regressor = fit_increment_regressor(samples)
        s = samples[0]
        result = apply_regressor(regressor, s.background, s.obs_filled, s.mask, s.grad_feature)
        np.testing.assert_allclose(result.analysis.values, s.truth.values, atol=1e-8)

    def test_increment_is_scaled_back_by_std(self, ring_grid, random_state):
        regressor = IncrementRegressor(
            slot_labels=("x",), coefficients=np.zeros((1, 4)), bias=np.array([1.0])
        )
        background = random_state(ring_grid)
        stats = NormStats(means={"x": 0.0}, stds={"x": 3.0})
        result = apply_regressor(regressor, background, background, background, background, stats)
        np.testing.assert_allclose(result.analysis.values - background.values, 3.0)
