"""
Unit tests for background-covariance tuning by cycled 3DVar.
"""

import numpy as np
import pytest

from src.application.cycling import normalized_analysis_rmse, run_cycle, tune_background_cov
from src.domain.entities.cycle import CycleConfig
from src.domain.entities.grid import SURFACE
from src.domain.entities.observations import MaskSpec, ObsErrorTable
from src.domain.value_objects import DAMethod
from src.infrastructure.assimilation import AnalysisContext, BackgroundCov, ObsCov, build_strategy, slot_stds
from src.infrastructure.osse import run_truth, simulate_observations

KEY = ("x", SURFACE)


@pytest.fixture
def truth(lorenz, lorenz_state):
    return run_truth(lorenz, lorenz_state, 120, 3)


@pytest.fixture
def obs(truth):
    table = ObsErrorTable(sigmas={KEY: 1.0})
    return simulate_observations(truth, table, MaskSpec(masked_ratio=0.5, seed=1), 3)


@pytest.fixture
def r():
    return ObsCov(ObsErrorTable(sigmas={KEY: 1.0}))


@pytest.fixture
def config():
    return CycleConfig(
        n_cycles=6, start_time=24, window_hours=12, spin_up_cycles=2, method=DAMethod.THREEDVAR
    )


def _threedvar(lorenz, truth, obs, r, b, config):
    strategy = build_strategy(DAMethod.THREEDVAR, AnalysisContext(model=lorenz, b=b, r=r))
    return run_cycle(lorenz, truth, obs, config, strategy)


class TestTuneBackgroundCov:
    """Tests for tune_background_cov."""

    def test_iteration_refits_variance_to_background_error(self, lorenz, truth, obs, r, config):
        b = BackgroundCov.uniform(lorenz.grid, 1.0)
        records = _threedvar(lorenz, truth, obs, r, b, config)
        errors = [rec.score("background", "x", "rmse") for rec in records if rec.index >= 2]

        tuned = tune_background_cov(lorenz, truth, obs, r, b, config, iterations=1)
        assert tuned.variances[KEY] == pytest.approx(float(np.mean(np.square(errors))))
        assert tuned.is_diagonal

    def test_grid_keeps_best_candidate(self, lorenz, truth, obs, r, config):
        b = BackgroundCov.uniform(lorenz.grid, 1.0)
        stds = {"x": slot_stds(truth)[KEY]}
        untuned = normalized_analysis_rmse(_threedvar(lorenz, truth, obs, r, b, config), stds, 2)

        tuned = tune_background_cov(
            lorenz, truth, obs, r, b, config, scales=(0.5, 1.0, 2.0), lengths=(2.0,)
        )
        assert tuned.variances[KEY] in (0.5, 1.0, 2.0)
        assert tuned.correlation_length in (None, 2.0)
        score = normalized_analysis_rmse(_threedvar(lorenz, truth, obs, r, tuned, config), stds, 2)
        assert score <= untuned

    def test_without_search_returns_input(self, lorenz, truth, obs, r, config):
        b = BackgroundCov.uniform(lorenz.grid, 1.0, correlation_length=2.0)
        tuned = tune_background_cov(lorenz, truth, obs, r, b, config)
        assert tuned.correlation_length == 2.0
        np.testing.assert_allclose(tuned.dense(), b.dense())


class TestNormalizedAnalysisRmse:
    """Tests for normalized_analysis_rmse."""

    def test_divides_by_slot_std(self, lorenz, truth, obs, r, config):
        records = _threedvar(lorenz, truth, obs, r, BackgroundCov.uniform(lorenz.grid, 1.0), config)
        mean = float(np.mean([rec.score("analysis", "x", "rmse") for rec in records[2:]]))
        assert normalized_analysis_rmse(records, {"x": 2.0}, 2) == pytest.approx(mean / 2.0)

    def test_no_records(self):
        assert normalized_analysis_rmse([], {"x": 1.0}, 0) == float("inf")
