"""
Shared helpers for assimilation tests.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
import pytest

from src.domain.entities.grid import SURFACE
from src.domain.entities.observations import ObsEntry, ObsErrorTable
from src.domain.entities.state import StateField
from src.infrastructure.assimilation import BackgroundCov, ObsCov


@pytest.fixture
def ring_r() -> ObsCov:
    return ObsCov(ObsErrorTable(sigmas={("x", SURFACE): 1.0}))


@pytest.fixture
def lorenz_b(lorenz) -> BackgroundCov:
    return BackgroundCov.uniform(lorenz.grid, 1.0)


@pytest.fixture
def ring_entry(rng: np.random.Generator) -> Callable[..., ObsEntry]:
    """Observations of a ring state at the cells selected by `observed`."""

    def _make(state: StateField, observed=None, noise: float = 0.0) -> ObsEntry:
        n = state.grid.n_lon
        mask = np.ones(n, dtype=bool) if observed is None else np.isin(np.arange(n), observed)
        values = state.values[0, 0, 0][mask] + noise * rng.standard_normal(int(mask.sum()))
        return ObsEntry(
            time=state.time,
            values={("x", SURFACE): values},
            masks={("x", SURFACE): mask.reshape(1, n)},
        )

    return _make
