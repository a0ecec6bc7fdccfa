"""
Observation entities: error table, mask specification and observation sets.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from src.domain.entities.grid import SURFACE, GridSpec, LevelLabel
from src.domain.exceptions import ObservationConfigError

SlotKey = tuple[str, LevelLabel]

_PRESSURE_LEVELS = (50, 200, 250, 300, 500, 700, 850, 925, 1000)
_NAN = None

# Observation error standard deviations on the 9 standard pressure levels.
_UPPER_AIR_SIGMA: dict[str, tuple[float | None, ...]] = {
    "z": (588.0, 525.0, 542.0, 381.0, 242.0, 186.0, 148.0, 138.0, 377.0),
    "t": (1.480, 1.225, 1.225, 1.090, 1.069, 1.385, 1.954, 2.364, 3.070),
    "q": (_NAN, _NAN, _NAN, 0.00012, 0.00043, 0.00087, 0.00115, 0.00121, 0.00130),
    "u": (3.196, 4.519, 4.764, 4.686, 4.235, 3.600, 2.327, 2.107, 3.763),
    "v": (2.787, 4.036, 4.476, 4.872, 4.010, 3.350, 2.692, 3.363, 2.825),
}
_SURFACE_SIGMA: dict[str, float] = {
    "t2m": 3.935,
    "u10": 1.940,
    "v10": 1.920,
    "msl": 100.0,
}


def _key_label(key: SlotKey) -> str:
    variable, level = key
    return variable if level == SURFACE else f"{variable}{level}"


@dataclass(frozen=True)
class ObsErrorTable:
    """Observation error sigma per (variable, level); None marks an unobserved slot."""

    sigmas: Mapping[SlotKey, float | None] = field(default_factory=dict)

    def __post_init__(self) -> None:
        normalized: dict[SlotKey, float | None] = {}
        for (variable, level), sigma in self.sigmas.items():
            if sigma is not None and (math.isnan(sigma)):
                sigma = None
            if sigma is not None and sigma < 0:
                raise ValueError(f"Observation sigma for {variable}/{level} must be >= 0")
            normalized[(variable, _coerce_level(level))] = sigma
        object.__setattr__(self, "sigmas", normalized)

    @classmethod
    def standard(cls) -> ObsErrorTable:
        """Reference table for the ERA5-like variable set."""
        sigmas: dict[SlotKey, float | None] = {}
        for name, values in _UPPER_AIR_SIGMA.items():
            for level, sigma in zip(_PRESSURE_LEVELS, values, strict=True):
                sigmas[(name, level)] = sigma
        for name, sigma in _SURFACE_SIGMA.items():
            sigmas[(name, SURFACE)] = sigma
        return cls(sigmas=sigmas)

    def sigma(self, variable: str, level: LevelLabel) -> float | None:
        return self.sigmas[(variable, _coerce_level(level))]

    def is_observed(self, key: SlotKey) -> bool:
        return self.sigmas.get(key) is not None

    def for_grid(self, grid: GridSpec) -> ObsErrorTable:
        """Resolve one sigma per grid slot; None marks the slot unobserved.

        A table entry wins, including an absent (None) entry. Slots the table
        does not list take VariableSpec.obs_sigma.

        Raises:
            ObservationConfigError: A slot has neither a table entry nor a
                variable-level sigma.
        """
        resolved: dict[SlotKey, float | None] = {}
        for slot in grid.slots():
            if slot.key in self.sigmas:
                resolved[slot.key] = self.sigmas[slot.key]
                continue
            sigma = grid.variable(slot.variable).obs_sigma
            if sigma is None:
                raise ObservationConfigError(
                    f"No observation error for {slot.label}; add it to the error "
                    "table or mark it absent"
                )
            resolved[slot.key] = sigma
        return ObsErrorTable(sigmas=resolved)

    def with_overrides(self, overrides: Mapping[str, float | None]) -> ObsErrorTable:
        """Override entries addressed by label ("z500", "t2m", "x")."""
        sigmas = dict(self.sigmas)
        by_label = {_key_label(key): key for key in sigmas}
        for label, sigma in overrides.items():
            key = by_label.get(label) or _parse_label(label)
            sigmas[key] = sigma
        return ObsErrorTable(sigmas=sigmas)

    def to_dict(self) -> dict[str, float | None]:
        return {_key_label(key): sigma for key, sigma in self.sigmas.items()}

    @classmethod
    def from_dict(cls, data: Mapping[str, float | None]) -> ObsErrorTable:
        return cls(sigmas={_parse_label(label): sigma for label, sigma in data.items()})


def _coerce_level(level: LevelLabel) -> LevelLabel:
    if isinstance(level, str) and level != SURFACE and level.isdigit():
        return int(level)
    return level


def _parse_label(label: str) -> SlotKey:
    digits = len(label) - len(label.rstrip("0123456789"))
    if digits and digits < len(label) and label not in _SURFACE_SIGMA:
        return (label[:-digits], int(label[-digits:]))
    return (label, SURFACE)


@dataclass(frozen=True)
class MaskSpec:
    """How observation locations are withheld.

    Attributes:
        masked_ratio: Fraction of cells without an observation, in [0, 1).
        seed: Seed of the counter-based generator.
        regenerate_each_time: Draw a new mask at every observation time.
    """

    masked_ratio: float
    seed: int = 0
    regenerate_each_time: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.masked_ratio < 1.0:
            raise ValueError(f"masked_ratio must be in [0, 1), got {self.masked_ratio}")

    @property
    def observed_fraction(self) -> float:
        return round(1.0 - self.masked_ratio, 10)

    def to_dict(self) -> dict[str, Any]:
        return {
            "masked_ratio": self.masked_ratio,
            "seed": self.seed,
            "regenerate_each_time": self.regenerate_each_time,
        }


@dataclass(frozen=True, eq=False)
class ObsEntry:
    """Observations at one time.

    masks[key] is a lat x lon boolean array, True where the cell is observed;
    values[key] holds the observed values in row-major cell order.
    """

    time: int
    values: Mapping[SlotKey, NDArray[np.float64]]
    masks: Mapping[SlotKey, NDArray[np.bool_]]

    def __post_init__(self) -> None:
        if set(self.values) != set(self.masks):
            raise ValueError("ObsEntry values and masks must cover the same slots.")
        for key, mask in self.masks.items():
            if int(np.count_nonzero(mask)) != len(self.values[key]):
                raise ValueError(
                    f"Observation count for {_key_label(key)} does not match its mask"
                )

    @property
    def n_obs(self) -> int:
        return sum(len(v) for v in self.values.values())

    def slot_keys(self) -> tuple[SlotKey, ...]:
        return tuple(self.masks)


@dataclass(frozen=True)
class ObsSet:
    """Time-ordered observations at a fixed cadence."""

    cadence: int = 3
    entries: tuple[ObsEntry, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.entries, key=lambda e: e.time))
        times = [e.time for e in ordered]
        if len(set(times)) != len(times):
            raise ValueError("ObsSet times must be unique.")
        object.__setattr__(self, "entries", ordered)

    def __iter__(self) -> Iterator[ObsEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def times(self) -> tuple[int, ...]:
        return tuple(e.time for e in self.entries)

    def at(self, time: int) -> ObsEntry | None:
        for entry in self.entries:
            if entry.time == time:
                return entry
        return None

    def window(self, start: int, end: int) -> ObsSet:
        """Entries with start <= time < end."""
        return ObsSet(
            cadence=self.cadence,
            entries=tuple(e for e in self.entries if start <= e.time < end),
        )
