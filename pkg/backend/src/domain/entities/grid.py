"""
Grid geometry entities.

A grid carries an ordered list of variables on an ordered list of levels.
Upper-air variables occupy every level; surface variables occupy level
index 0 only and are labelled "surface". The array layout is always
[variable][level][lat][lon], so inactive (variable, level) slots still take
space in the flattened vector and are held at zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from src.domain.value_objects.topology import Topology
from src.domain.value_objects.variable_kind import VariableKind

SURFACE = "surface"

LevelLabel = int | str


@dataclass(frozen=True)
class VariableSpec:
    """A physical variable carried by the grid.

    Attributes:
        name: Identifier, e.g. "z", "t2m" or "x".
        units: Free-form unit string.
        kind: Upper-air (all levels) or surface (level index 0 only).
        obs_sigma: Observation error for every slot of the variable. None
            carries no sigma: the error table then decides, and a slot the
            table marks absent (None) is unobserved. A slot with neither is
            a configuration error, see ObsErrorTable.for_grid.
    """

    name: str
    units: str = ""
    kind: VariableKind = VariableKind.UPPER_AIR
    obs_sigma: float | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("Variable name must be non-empty.")
        if self.obs_sigma is not None and self.obs_sigma < 0:
            raise ValueError(f"obs_sigma must be >= 0 for variable {self.name}.")

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "units": self.units,
            "kind": self.kind.value,
            "obs_sigma": self.obs_sigma,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> VariableSpec:
        return cls(
            name=data["name"],
            units=data.get("units", ""),
            kind=VariableKind.from_string(data.get("kind", "upper_air")),
            obs_sigma=data.get("obs_sigma"),
        )


@dataclass(frozen=True)
class FieldSlot:
    """An active (variable, level) pair of a grid."""

    variable: str
    level: LevelLabel
    var_index: int
    level_index: int

    @property
    def key(self) -> tuple[str, LevelLabel]:
        return (self.variable, self.level)

    @property
    def label(self) -> str:
        """Short label such as "z500" or "t2m"."""
        if self.level == SURFACE:
            return self.variable
        return f"{self.variable}{self.level}"


@dataclass(frozen=True)
class GridSpec:
    """Latitude-longitude (or ring) grid carrying several variables.

    Longitudes are implicit: n_lon uniform, periodic points starting at 0°.
    """

    lat_deg: tuple[float, ...]
    n_lon: int
    levels: tuple[LevelLabel, ...]
    variables: tuple[VariableSpec, ...]
    topology: Topology = Topology.SPHERE
    _slots: tuple[FieldSlot, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "lat_deg", tuple(float(v) for v in self.lat_deg))
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "variables", tuple(self.variables))

        if not self.lat_deg:
            raise ValueError("Grid needs at least one latitude.")
        if any(abs(lat) > 90.0 for lat in self.lat_deg):
            raise ValueError("Latitudes must lie within [-90, 90] degrees.")
        diffs = np.diff(np.asarray(self.lat_deg))
        if diffs.size and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("Latitudes must be strictly monotone.")
        if self.n_lon < 1:
            raise ValueError("n_lon must be >= 1.")
        if not self.levels:
            raise ValueError("Grid needs at least one level.")
        if SURFACE in self.levels and len(self.levels) != 1:
            raise ValueError("'surface' is only valid as the single level.")
        names = [v.name for v in self.variables]
        if not names:
            raise ValueError("Grid needs at least one variable.")
        if len(set(names)) != len(names):
            raise ValueError(f"Variable names must be unique: {names}")
        if self.levels == (SURFACE,) and any(
            v.kind is VariableKind.UPPER_AIR for v in self.variables
        ):
            raise ValueError("Upper-air variables need pressure levels.")

        slots: list[FieldSlot] = []
        for vi, var in enumerate(self.variables):
            if var.kind is VariableKind.SURFACE:
                slots.append(FieldSlot(var.name, SURFACE, vi, 0))
                continue
            for li, level in enumerate(self.levels):
                slots.append(FieldSlot(var.name, level, vi, li))
        object.__setattr__(self, "_slots", tuple(slots))

    @property
    def n_lat(self) -> int:
        return len(self.lat_deg)

    @property
    def n_level(self) -> int:
        return len(self.levels)

    @property
    def n_var(self) -> int:
        return len(self.variables)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (self.n_var, self.n_level, self.n_lat, self.n_lon)

    @property
    def size(self) -> int:
        """Flattened state dimension m."""
        return self.n_var * self.n_level * self.n_lat * self.n_lon

    @property
    def n_cells(self) -> int:
        return self.n_lat * self.n_lon

    @property
    def lon_deg(self) -> NDArray[np.float64]:
        return np.arange(self.n_lon, dtype=np.float64) * (360.0 / self.n_lon)

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def slots(self) -> tuple[FieldSlot, ...]:
        """Active slots in canonical (variable-major, then level) order."""
        return self._slots

    def slot(self, variable: str, level: LevelLabel | None = None) -> FieldSlot:
        """Look up an active slot; level may be omitted for surface variables."""
        for slot in self._slots:
            if slot.variable != variable:
                continue
            if level is None or slot.level == level or str(slot.level) == str(level):
                return slot
        raise KeyError(f"No slot for variable={variable!r} level={level!r}")

    def slot_by_label(self, label: str) -> FieldSlot:
        for slot in self._slots:
            if slot.label == label:
                return slot
        raise KeyError(f"No slot labelled {label!r}")

    def variable(self, name: str) -> VariableSpec:
        for var in self.variables:
            if var.name == name:
                return var
        raise KeyError(f"Unknown variable {name!r}")

    def active_mask(self) -> NDArray[np.bool_]:
        """Boolean array of grid shape, True on cells of active slots."""
        mask = np.zeros(self.shape, dtype=bool)
        for slot in self._slots:
            mask[slot.var_index, slot.level_index] = True
        return mask

    def to_dict(self) -> dict[str, Any]:
        return {
            "lat_deg": list(self.lat_deg),
            "n_lon": self.n_lon,
            "levels": list(self.levels),
            "variables": [v.to_dict() for v in self.variables],
            "topology": self.topology.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> GridSpec:
        return cls(
            lat_deg=tuple(data["lat_deg"]),
            n_lon=int(data["n_lon"]),
            levels=tuple(data["levels"]),
            variables=tuple(VariableSpec.from_dict(v) for v in data["variables"]),
            topology=Topology.from_string(data.get("topology", "sphere")),
        )

    @classmethod
    def regular(
        cls,
        n_lat: int,
        n_lon: int,
        levels: tuple[LevelLabel, ...],
        variables: tuple[VariableSpec, ...],
    ) -> GridSpec:
        """Equally spaced cell-centre latitudes from south to north (poles excluded)."""
        step = 180.0 / n_lat
        lats = tuple(-90.0 + step * (i + 0.5) for i in range(n_lat))
        return cls(lat_deg=lats, n_lon=n_lon, levels=levels, variables=variables)

    @classmethod
    def ring(cls, m: int, variable: str = "x", obs_sigma: float | None = None) -> GridSpec:
        """Degenerate one-variable, one-level, one-latitude ring of m points."""
        return cls(
            lat_deg=(0.0,),
            n_lon=m,
            levels=(SURFACE,),
            variables=(
                VariableSpec(
                    name=variable,
                    kind=VariableKind.SURFACE,
                    obs_sigma=obs_sigma,
                ),
            ),
            topology=Topology.RING,
        )
