"""
Self-describing array container.

    b"DAB1" | uint32 LE header length | UTF-8 JSON header | <f4 row-major payload

The header always carries "dims" and "dtype"; state series add
"index_order", "variables", "levels" and strictly increasing "times".
"""

from __future__ import annotations

import json
import math
import os
import struct
import tempfile
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import StateField
from src.domain.exceptions import FormatError, MissingArtifactError

MAGIC = b"DAB1"
DTYPE = "<f4"
INDEX_ORDER = ("time", "variable", "level", "lat", "lon")
_LENGTH = struct.Struct("<I")


def atomic_write_bytes(path: Path, data: bytes) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _check_times(times: Sequence[Any] | None) -> None:
    if times is not None and any(b <= a for a, b in zip(times, times[1:])):
        raise FormatError("Container time stamps must be strictly increasing.")


def encode_container(header: Mapping[str, Any], array: NDArray[Any]) -> bytes:
    payload = np.ascontiguousarray(array, dtype=DTYPE)
    full_header = {**header, "dims": list(payload.shape), "dtype": DTYPE}
    _check_times(full_header.get("times"))
    header_bytes = json.dumps(full_header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return MAGIC + _LENGTH.pack(len(header_bytes)) + header_bytes + payload.tobytes()


def decode_container(data: bytes) -> tuple[dict[str, Any], NDArray[np.float32]]:
    """Parse container bytes.

    Raises:
        FormatError: Bad magic, truncated header, a payload whose length
            disagrees with the header dims, or time stamps that do not increase.
    """
    if data[:4] != MAGIC:
        raise FormatError(f"Bad magic {data[:4]!r}, expected {MAGIC!r}")
    if len(data) < 8:
        raise FormatError("Container is truncated before the header length.")
    (header_len,) = _LENGTH.unpack(data[4:8])
    header_end = 8 + header_len
    if len(data) < header_end:
        raise FormatError(
            "Container header is truncated", expected=header_len, actual=len(data) - 8
        )
    try:
        header = json.loads(data[8:header_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError("Container header is not valid JSON.") from exc
    _check_times(header.get("times"))
    dims = [int(d) for d in header.get("dims", [])]
    expected = math.prod(dims) * 4
    actual = len(data) - header_end
    if expected != actual:
        raise FormatError(
            f"Payload is {actual} bytes but dims {dims} need {expected}",
            expected=expected,
            actual=actual,
        )
    array = np.frombuffer(data, dtype=DTYPE, offset=header_end).reshape(dims)
    return header, array.copy()


def write_container(path: str | Path, header: Mapping[str, Any], array: NDArray[Any]) -> None:
    atomic_write_bytes(Path(path), encode_container(header, array))


def read_container(path: str | Path) -> tuple[dict[str, Any], NDArray[np.float32]]:
    path = Path(path)
    if not path.is_file():
        raise MissingArtifactError("Container not found", path=str(path))
    return decode_container(path.read_bytes())


def series_header(grid: GridSpec, times: Sequence[int], **extra: Any) -> dict[str, Any]:
    return {
        "index_order": list(INDEX_ORDER),
        "variables": list(grid.variable_names),
        "levels": list(grid.levels),
        "times": [int(t) for t in times],
        **extra,
    }


def write_states(path: str | Path, states: Sequence[StateField], **extra: Any) -> None:
    """Store a time series of states as one [time][var][level][lat][lon] container."""
    if not states:
        raise ValueError("Cannot write an empty state series.")
    grid = states[0].grid
    array = np.stack([s.values for s in states])
    write_container(path, series_header(grid, [s.time for s in states], **extra), array)


def read_states(path: str | Path, grid: GridSpec) -> list[StateField]:
    """Load a state series written by write_states.

    Raises:
        FormatError: The container does not match `grid`.
    """
    header, array = read_container(path)
    if list(header.get("variables", [])) != list(grid.variable_names):
        raise FormatError(f"Container variables {header.get('variables')} do not match the grid")
    if tuple(array.shape[1:]) != grid.shape:
        raise FormatError(f"Container dims {list(array.shape)} do not match grid {grid.shape}")
    times = header.get("times", [])
    if len(times) != array.shape[0]:
        raise FormatError("Container time index does not match its leading dimension.")
    return [
        StateField(grid=grid, values=array[i].astype(np.float64), time=int(t))
        for i, t in enumerate(times)
    ]
