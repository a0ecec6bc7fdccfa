"""
Pytest configuration and shared fixtures.
"""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest
import yaml

from src.domain.entities.grid import SURFACE, GridSpec, VariableSpec
from src.domain.entities.state import StateField
from src.domain.value_objects.variable_kind import VariableKind
from src.infrastructure.dynamics.advection import LatLonAdvectionModel
from src.infrastructure.dynamics.lorenz96 import Lorenz96Model
from src.infrastructure.osse.truth import spin_up


# ========== GRIDS AND MODELS ==========


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def ring_grid() -> GridSpec:
    return GridSpec.ring(40, obs_sigma=1.0)


@pytest.fixture
def latlon_grid() -> GridSpec:
    """4 x 8 grid with an upper-air variable on two levels and a surface variable."""
    return GridSpec.regular(
        4,
        8,
        (500, 850),
        (
            VariableSpec(name="z", units="m2 s-2", obs_sigma=1.0),
            VariableSpec(name="t2m", units="K", kind=VariableKind.SURFACE, obs_sigma=0.5),
        ),
    )


@pytest.fixture
def lorenz() -> Lorenz96Model:
    return Lorenz96Model(m=40, forcing=8.0, leads=(3, 6, 12, 24))


@pytest.fixture
def lorenz_state(lorenz: Lorenz96Model) -> StateField:
    """A state on the attractor."""
    return spin_up(lorenz, lorenz.initial_state(seed=3), 720, 24)


@pytest.fixture
def advection() -> LatLonAdvectionModel:
    grid = GridSpec.regular(
        16,
        32,
        (SURFACE,),
        (
            VariableSpec(name="a", kind=VariableKind.SURFACE, obs_sigma=0.5),
            VariableSpec(name="b", kind=VariableKind.SURFACE, obs_sigma=1.0),
        ),
    )
    return LatLonAdvectionModel(lat_lon_grid=grid, omega=15.0, kappa=0.1, leads=(3, 6, 12, 24))


@pytest.fixture
def random_state(rng: np.random.Generator) -> Callable[..., StateField]:
    """Factory for random states whose inactive slots stay zero."""

    def _make(grid: GridSpec, time: int = 0, scale: float = 1.0, offset: float = 0.0) -> StateField:
        values = offset + scale * rng.standard_normal(grid.shape)
        return StateField(grid=grid, values=values * grid.active_mask(), time=time)

    return _make


# ========== RUN CONFIGURATIONS ==========


def lorenz_run_config(root: Path, **sections: Any) -> dict[str, Any]:
    """Small Lorenz96 run: 40 points, a short truth run and a few cycles."""
    data: dict[str, Any] = {
        "name": "lorenz_small",
        "seed": 7,
        "model": {
            "type": "lorenz96",
            "supported_leads": [3, 6, 12, 24],
            "lorenz96": {"m": 40, "forcing": 8.0},
        },
        "truth": {"spin_up_hours": 240, "horizon_hours": 1200, "save_every": 3},
        "osse": {"cadence_hours": 3, "mask_ratios": [0.5, 0.75], "obs_errors": {"x": 1.0}},
        "da": {
            "method": "3dvar",
            "background": {"perturbation_scale": 0.3, "max_samples": 50},
            "solver": {"max_iterations": 50},
            "enkf": {"members": 10, "inflation": 1.05, "localization": 4.0},
            "regressor": {"max_samples": 40},
        },
        "cycle": {
            "split": "test",
            "mask_ratio": 0.5,
            "window_hours": 12,
            "n_cycles": 8,
            "spin_up_cycles": 2,
            "initial_perturbation": 0.5,
        },
        "eval": {"launch_interval_hours": 48, "max_lead_hours": 48, "lead_step_hours": 12},
        "output": {"root": str(root)},
    }
    for key, value in sections.items():
        if isinstance(value, dict) and isinstance(data.get(key), dict):
            data[key] = {**data[key], **value}
        else:
            data[key] = value
    return data


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[..., Path]:
    """Write a run configuration YAML and return its path."""

    def _write(data: dict[str, Any], name: str = "run.yaml") -> Path:
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def lorenz_config() -> Callable[..., dict[str, Any]]:
    """The lorenz_run_config builder, for tests that tweak sections."""
    return lorenz_run_config
