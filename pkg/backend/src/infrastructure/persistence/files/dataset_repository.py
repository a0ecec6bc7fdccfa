"""
File-backed dataset repository.

Series are sharded by SHARD_HOURS of model time; a times.json index per
split lists every stored time and the shard holding it.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import StateField
from src.domain.exceptions import FormatError, MissingArtifactError
from src.domain.repositories.dataset_repository import SERIES_KINDS, IDatasetRepository

from .container import (
    atomic_write_bytes,
    read_container,
    read_states,
    series_header,
    write_container,
    write_states,
)
from .layout import DatasetLayout

logger = logging.getLogger(__name__)

TIMES_INDEX = "times.json"


def write_json(path: Path, data: Any) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    atomic_write_bytes(path, text.encode("utf-8"))


def read_json(path: Path) -> Any:
    if not path.is_file():
        raise MissingArtifactError("Missing file", path=str(path))
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"Invalid JSON in {path}") from exc


def _clear_shards(directory: Path) -> None:
    if directory.is_dir():
        for stale in directory.glob("shard_*.dab"):
            stale.unlink()


@dataclass(frozen=True)
class FileDatasetRepository(IDatasetRepository):
    """Dataset stored under a DatasetLayout root."""

    layout: DatasetLayout

    def _series_dir(self, kind: str, split: str) -> Path:
        if kind == "truth":
            return self.layout.truth_dir(split)
        if kind == "background":
            return self.layout.background_dir(split)
        if kind == "obs":
            return self.layout.obs_dir(split)
        raise ValueError(f"Unknown series kind '{kind}'. Valid: {list(SERIES_KINDS)}")

    def _document_path(self, name: str) -> Path:
        return self.layout.root / f"{name}.json"

    def save_grid(self, grid: GridSpec) -> None:
        write_json(self.layout.grid_path, grid.to_dict())

    def load_grid(self) -> GridSpec:
        return GridSpec.from_dict(read_json(self.layout.grid_path))

    def _write_sharded(
        self, directory: Path, times: Sequence[int], arrays: Sequence[NDArray[Any]], header: dict[str, Any]
    ) -> None:
        _clear_shards(directory)
        shards: dict[str, list[int]] = {}
        for i, t in enumerate(times):
            shards.setdefault(self.layout.shard_name(t), []).append(i)
        for name, rows in shards.items():
            write_container(
                directory / name,
                {**header, "times": [int(times[i]) for i in rows]},
                np.stack([arrays[i] for i in rows]),
            )
        write_json(
            directory / TIMES_INDEX,
            {
                "times": [int(t) for t in times],
                "shards": {name: [int(times[i]) for i in rows] for name, rows in shards.items()},
            },
        )

    def save_series(self, kind: str, split: str, states: Sequence[StateField]) -> None:
        directory = self._series_dir(kind, split)
        header = series_header(states[0].grid, [], kind=kind, split=split) if states else {}
        self._write_sharded(
            directory, [s.time for s in states], [s.values for s in states], header
        )
        logger.info(f"Wrote {len(states)} {kind} states to {directory}")

    def _index(self, directory: Path) -> dict[str, Any]:
        return read_json(directory / TIMES_INDEX)

    def load_series(self, kind: str, split: str, grid: GridSpec) -> list[StateField]:
        directory = self._series_dir(kind, split)
        index = self._index(directory)
        states: list[StateField] = []
        for name in sorted(index["shards"]):
            states.extend(read_states(directory / name, grid))
        if [s.time for s in states] != list(index["times"]):
            raise FormatError(f"Shards in {directory} disagree with {TIMES_INDEX}")
        return states

    def has_series(self, kind: str, split: str) -> bool:
        return (self._series_dir(kind, split) / TIMES_INDEX).is_file()

    def save_masks(
        self,
        observed_fraction: float,
        split: str,
        times: Sequence[int],
        masks: Sequence[NDArray[np.bool_]],
    ) -> None:
        if len(times) != len(masks):
            raise ValueError("Need one mask per time.")
        directory = self.layout.obsmask_dir(observed_fraction, split)
        self._write_sharded(
            directory,
            times,
            [np.asarray(m, dtype=np.float32) for m in masks],
            {"observed_fraction": observed_fraction, "split": split},
        )
        logger.info(f"Wrote {len(times)} masks to {directory}")

    def load_masks(
        self, observed_fraction: float, split: str
    ) -> tuple[list[int], list[NDArray[np.bool_]]]:
        directory = self.layout.obsmask_dir(observed_fraction, split)
        index = self._index(directory)
        times: list[int] = []
        masks: list[NDArray[np.bool_]] = []
        for name in sorted(index["shards"]):
            header, array = read_container(directory / name)
            times.extend(int(t) for t in header["times"])
            masks.extend(array[i] > 0.5 for i in range(array.shape[0]))
        return times, masks

    def save_field(self, name: str, state: StateField) -> None:
        write_states(self.layout.root / f"{name}.dab", [state], kind=name)

    def load_field(self, name: str, grid: GridSpec) -> StateField:
        return read_states(self.layout.root / f"{name}.dab", grid)[0]

    def save_document(self, name: str, data: dict[str, Any]) -> None:
        write_json(self._document_path(name), data)

    def load_document(self, name: str) -> dict[str, Any]:
        return dict(read_json(self._document_path(name)))

    def has_document(self, name: str) -> bool:
        return self._document_path(name).is_file()
