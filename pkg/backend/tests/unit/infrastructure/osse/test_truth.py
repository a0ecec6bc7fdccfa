"""
Unit tests for truth runs and splits.
"""

import pytest

from src.infrastructure.osse import run_truth, spin_up, split_series


def test_run_truth_saves_every_step(lorenz, lorenz_state):
    states = run_truth(lorenz, lorenz_state, horizon=12, save_every=3)
    assert [s.time for s in states] == [0, 3, 6, 9, 12]
    assert states[2] == lorenz.step(lorenz.step(lorenz_state, 3), 3)


def test_save_every_must_divide_horizon(lorenz, lorenz_state):
    with pytest.raises(ValueError, match="divide"):
        run_truth(lorenz, lorenz_state, horizon=10, save_every=3)


def test_spin_up_resets_clock(lorenz):
    state = spin_up(lorenz, lorenz.initial_state(seed=1), 48, 24)
    assert state.time == 0
    assert state != lorenz.initial_state(seed=1)


def test_split_is_contiguous(ring_grid, random_state):
    series = [random_state(ring_grid, time=3 * i) for i in range(10)]
    splits = split_series(series, (0.7, 0.1, 0.2))
    assert [len(splits[k]) for k in ("train", "val", "test")] == [7, 1, 2]
    assert splits["val"][0].time == 21
    assert splits["test"][-1].time == 27


@pytest.mark.parametrize("fractions", [(0.5, 0.5, 0.5), (1.2, -0.1, -0.1), (0.5, 0.5)])
def test_invalid_fractions(ring_grid, random_state, fractions):
    with pytest.raises(ValueError):
        split_series([random_state(ring_grid)], fractions)
