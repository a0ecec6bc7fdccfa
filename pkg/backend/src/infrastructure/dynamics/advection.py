"""
Solid-body zonal advection with zonal diffusion on a lat-lon grid.

Each call shifts every field an integer number of longitude cells and then
applies an explicit three-point diffusion stencil along longitude. The model
is linear, so its tangent is the step itself and its adjoint is the reverse
shift of the (symmetric) diffusion.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import FloatArray, StateField

from .base import DynamicsModel


@dataclass(frozen=True)
class LatLonAdvectionModel(DynamicsModel):
    """Linear lat-lon surrogate.

    Attributes:
        lat_lon_grid: Grid carrying the named variables.
        omega: Angular speed in degrees longitude per hour (eastward > 0).
        kappa: Zonal diffusion in grid-units^2 per hour.
        leads: Supported leads; omega * lead * n_lon / 360 must be an integer
            for each of them.
        climate: Optional per-slot (mean, amplitude) used by initial_state,
            keyed by slot label.
    """

    lat_lon_grid: GridSpec
    omega: float = 15.0
    kappa: float = 0.0
    leads: tuple[int, ...] = (6, 12, 24)
    climate: Mapping[str, tuple[float, float]] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")
        object.__setattr__(self, "leads", tuple(sorted(int(v) for v in self.leads)))
        for lead in self.leads:
            cells = self.omega * lead * self.lat_lon_grid.n_lon / 360.0
            if abs(cells - round(cells)) > 1e-9:
                raise ValueError(
                    f"omega={self.omega} deg/h moves {cells} cells in {lead} h; "
                    "shifts must be whole cells"
                )

    @property
    def grid(self) -> GridSpec:
        return self.lat_lon_grid

    @property
    def supported_leads(self) -> tuple[int, ...]:
        return self.leads

    @property
    def is_linear(self) -> bool:
        return True

    def shift_cells(self, lead: int) -> int:
        return int(round(self.omega * lead * self.lat_lon_grid.n_lon / 360.0))

    def _diffuse(self, values: FloatArray, lead: int) -> FloatArray:
        if self.kappa == 0.0:
            return values
        substeps = max(1, math.ceil(2.0 * self.kappa * lead))
        coeff = self.kappa * lead / substeps
        for _ in range(substeps):
            values = values + coeff * (
                np.roll(values, 1, axis=-1) - 2.0 * values + np.roll(values, -1, axis=-1)
            )
        return values

    def _step(self, x: FloatArray, lead: int) -> FloatArray:
        values = np.roll(x.reshape(self.grid.shape), self.shift_cells(lead), axis=-1)
        return self._diffuse(values, lead).ravel()

    def _tangent(self, x: FloatArray, dx: FloatArray, lead: int) -> FloatArray:
        return self._step(dx, lead)

    def _adjoint(self, x: FloatArray, lam: FloatArray, lead: int) -> FloatArray:
        values = self._diffuse(lam.reshape(self.grid.shape), lead)
        return np.roll(values, -self.shift_cells(lead), axis=-1).ravel()

    def initial_state(self, seed: int = 0) -> StateField:
        """Per-slot mean plus a seeded sum of low-wavenumber waves."""
        grid = self.grid
        rng = np.random.default_rng(seed)
        lat = np.deg2rad(np.asarray(grid.lat_deg))[:, None]
        lon = np.deg2rad(grid.lon_deg)[None, :]
        values = np.zeros(grid.shape)
        for slot in grid.slots():
            mean, amplitude = self.climate.get(slot.label, (0.0, 1.0))
            field_ = np.zeros((grid.n_lat, grid.n_lon))
            for wavenumber in (1, 2, 3):
                phase = rng.uniform(0.0, 2.0 * np.pi)
                weight = rng.normal() / wavenumber
                field_ += weight * np.cos(wavenumber * lon + phase) * np.cos(lat)
            field_ += 0.3 * rng.normal() * np.sin(lat)
            scale = np.abs(field_).max() or 1.0
            values[slot.var_index, slot.level_index] = mean + amplitude * field_ / scale
        return StateField(grid=grid, values=values, time=0)
