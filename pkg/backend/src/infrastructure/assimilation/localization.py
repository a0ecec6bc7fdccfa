"""Gaspari-Cohn localization and horizontal distances between grid cells."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import FloatArray
from src.domain.value_objects.topology import Topology

EARTH_RADIUS_KM = 6371.0


def gaspari_cohn(distance: ArrayLike, length: float) -> FloatArray:
    """Fifth-order piecewise rational taper, 1 at 0 and 0 beyond 2*length."""
    if length <= 0:
        raise ValueError(f"Localization length must be > 0, got {length}")
    r = np.abs(np.asarray(distance, dtype=np.float64)) / length
    taper = np.zeros_like(r)

    inner = r <= 1.0
    ri = r[inner]
    taper[inner] = (
        -0.25 * ri**5 + 0.5 * ri**4 + 0.625 * ri**3 - (5.0 / 3.0) * ri**2 + 1.0
    )

    outer = (r > 1.0) & (r < 2.0)
    ro = r[outer]
    taper[outer] = (
        ro**5 / 12.0
        - 0.5 * ro**4
        + 0.625 * ro**3
        + (5.0 / 3.0) * ro**2
        - 5.0 * ro
        + 4.0
        - 2.0 / (3.0 * ro)
    )
    return np.clip(taper, 0.0, 1.0)


def _cell_coordinates(grid: GridSpec, flat_indices: NDArray[np.intp]) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
    cells = np.asarray(flat_indices) % grid.n_cells
    return cells // grid.n_lon, cells % grid.n_lon


def horizontal_distance(
    grid: GridSpec, rows: NDArray[np.intp], cols: NDArray[np.intp]
) -> FloatArray:
    """Distance matrix between the cells of two sets of flat state indices.

    Sphere grids give great-circle kilometres; ring grids give cyclic index
    distance along longitude. Variables and levels are ignored.
    """
    lat_a, lon_a = _cell_coordinates(grid, rows)
    lat_b, lon_b = _cell_coordinates(grid, cols)
    if grid.topology is Topology.RING:
        delta = np.abs(lon_a[:, None] - lon_b[None, :])
        return np.minimum(delta, grid.n_lon - delta).astype(np.float64)

    lats = np.deg2rad(np.asarray(grid.lat_deg))
    lons = np.deg2rad(grid.lon_deg)
    phi_a, phi_b = lats[lat_a][:, None], lats[lat_b][None, :]
    dlam = lons[lon_a][:, None] - lons[lon_b][None, :]
    hav = (
        np.sin((phi_b - phi_a) / 2.0) ** 2
        + np.cos(phi_a) * np.cos(phi_b) * np.sin(dlam / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(hav, 0.0, 1.0)))
