"""
Unit tests for the array container and the dataset layout.
"""

import json
import struct

import numpy as np
import pytest

from src.domain.exceptions import FormatError, MissingArtifactError
from src.infrastructure.persistence.files import (
    DatasetLayout,
    decode_container,
    encode_container,
    ratio_dirname,
    read_container,
)
from src.infrastructure.persistence.files.container import read_states, write_states


class TestContainer:
    """Tests for container encoding and decoding."""

    def test_header_carries_dims_and_dtype(self):
        data = encode_container({"kind": "truth"}, np.arange(6, dtype=np.float64).reshape(2, 3))
        header, array = decode_container(data)
        assert header == {"kind": "truth", "dims": [2, 3], "dtype": "<f4"}
        assert array.dtype == np.float32
        np.testing.assert_array_equal(array, np.arange(6).reshape(2, 3))

    def test_layout_of_bytes(self):
        data = encode_container({}, np.ones(2))
        assert data[:4] == b"DAB1"
        (length,) = struct.unpack("<I", data[4:8])
        assert json.loads(data[8 : 8 + length]) == {"dims": [2], "dtype": "<f4"}
        assert len(data) == 8 + length + 8

    def test_encoding_is_deterministic(self):
        array = np.linspace(0.0, 1.0, 12).reshape(3, 4)
        assert encode_container({"b": 1, "a": 2}, array) == encode_container({"a": 2, "b": 1}, array)

    def test_bad_magic(self):
        data = encode_container({}, np.ones(2))
        with pytest.raises(FormatError, match="magic"):
            decode_container(b"XXXX" + data[4:])

    def test_truncated_header(self):
        data = encode_container({"note": "x" * 40}, np.ones(2))
        with pytest.raises(FormatError, match="truncated"):
            decode_container(data[:20])

    def test_payload_length_mismatch(self):
        data = encode_container({}, np.ones((2, 2)))
        with pytest.raises(FormatError) as excinfo:
            decode_container(data[:-4])
        assert excinfo.value.expected == 16
        assert excinfo.value.actual == 12

    def test_times_must_increase(self):
        with pytest.raises(FormatError, match="increasing"):
            encode_container({"times": [0, 6, 6]}, np.ones((3, 1)))

    def test_decoded_times_must_increase(self, tmp_path):
        header = json.dumps({"dims": [3, 1], "dtype": "<f4", "times": [0, 12, 6]}).encode("utf-8")
        data = b"DAB1" + struct.pack("<I", len(header)) + header + np.ones(3, dtype="<f4").tobytes()
        with pytest.raises(FormatError, match="increasing"):
            decode_container(data)
        (tmp_path / "bad.dab").write_bytes(data)
        with pytest.raises(FormatError, match="increasing"):
            read_container(tmp_path / "bad.dab")

    def test_missing_file(self, tmp_path):
        with pytest.raises(MissingArtifactError) as excinfo:
            read_container(tmp_path / "absent.dab")
        assert excinfo.value.path.endswith("absent.dab")


class TestStateSeries:
    """Tests for write_states and read_states."""

    def test_round_trip_at_single_precision(self, tmp_path, latlon_grid, random_state):
        states = [random_state(latlon_grid, time=t) for t in (0, 6, 12)]
        write_states(tmp_path / "series.dab", states)
        loaded = read_states(tmp_path / "series.dab", latlon_grid)
        assert [s.time for s in loaded] == [0, 6, 12]
        np.testing.assert_array_equal(loaded[1].values, states[1].values.astype(np.float32))

    def test_grid_mismatch(self, tmp_path, latlon_grid, ring_grid, random_state):
        write_states(tmp_path / "series.dab", [random_state(ring_grid)])
        with pytest.raises(FormatError):
            read_states(tmp_path / "series.dab", latlon_grid)

    def test_header_lists_index_order(self, tmp_path, ring_grid, random_state):
        write_states(tmp_path / "series.dab", [random_state(ring_grid, time=3)])
        header, _ = read_container(tmp_path / "series.dab")
        assert header["index_order"] == ["time", "variable", "level", "lat", "lon"]
        assert header["levels"] == ["surface"]
        assert header["times"] == [3]


class TestLayout:
    """Tests for DatasetLayout."""

    @pytest.mark.parametrize(("fraction", "name"), [(0.1, "partial_0.1"), (0.05, "partial_0.05"), (1.0, "partial_1")])
    def test_ratio_dirname(self, fraction, name):
        assert ratio_dirname(fraction) == name

    def test_paths(self, tmp_path):
        layout = DatasetLayout(tmp_path)
        assert layout.obsmask_dir(0.1, "test") == tmp_path / "obsmask" / "partial_0.1" / "test"
        assert layout.shard_name(1500) == "shard_0002.dab"
        assert layout.forecast_states_path("enkf", 336).name == "00000336.dab"
        assert layout.metrics_path("3dvar_summary").name == "3dvar_summary.csv"

    def test_unknown_split(self, tmp_path):
        with pytest.raises(ValueError, match="split"):
            DatasetLayout(tmp_path).truth_dir("holdout")

    def test_recorded_methods(self, tmp_path):
        layout = DatasetLayout(tmp_path)
        assert layout.recorded_methods() == []
        layout.records_path("enkf").parent.mkdir(parents=True)
        layout.records_path("enkf").write_text("")
        layout.records_path("3dvar").write_text("")
        assert layout.recorded_methods() == ["3dvar", "enkf"]
