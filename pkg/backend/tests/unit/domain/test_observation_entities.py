"""
Unit tests for observation entities.
"""

import numpy as np
import pytest

from src.domain.entities.grid import SURFACE
from src.domain.entities.observations import MaskSpec, ObsEntry, ObsErrorTable, ObsSet
from src.domain.exceptions import ObservationConfigError


class TestObsErrorTable:
    """Tests for ObsErrorTable."""

    def test_standard_table_values(self):
        table = ObsErrorTable.standard()
        assert table.sigma("z", 500) == 242.0
        assert table.sigma("t2m", SURFACE) == 3.935
        assert table.sigma("q", 50) is None
        assert not table.is_observed(("q", 200))

    def test_overrides_by_label(self):
        table = ObsErrorTable.standard().with_overrides({"z500": 100.0, "x": 1.0, "u10": None})
        assert table.sigma("z", 500) == 100.0
        assert table.sigma("x", SURFACE) == 1.0
        assert table.sigma("u10", SURFACE) is None

    def test_for_grid_falls_back_to_variable_sigma(self, latlon_grid):
        resolved = ObsErrorTable(sigmas={("z", 500): 3.0}).for_grid(latlon_grid)
        assert resolved.sigmas == {("z", 500): 3.0, ("z", 850): 1.0, ("t2m", SURFACE): 0.5}

    def test_for_grid_without_any_sigma_raises(self):
        from src.domain.entities.grid import GridSpec

        with pytest.raises(ObservationConfigError, match="x"):
            ObsErrorTable().for_grid(GridSpec.ring(8))

    def test_absent_table_entry_marks_slot_unobserved(self, latlon_grid):
        resolved = ObsErrorTable(sigmas={("t2m", SURFACE): None}).for_grid(latlon_grid)
        assert resolved.sigma("t2m", SURFACE) is None
        assert not resolved.is_observed(("t2m", SURFACE))
        assert resolved.sigma("z", 500) == 1.0

    def test_variable_without_sigma_observed_through_table(self):
        from src.domain.entities.grid import GridSpec

        resolved = ObsErrorTable(sigmas={("x", SURFACE): 2.0}).for_grid(GridSpec.ring(8))
        assert resolved.sigmas == {("x", SURFACE): 2.0}

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            ObsErrorTable(sigmas={("x", SURFACE): -1.0})

    def test_dict_round_trip_uses_labels(self):
        table = ObsErrorTable(sigmas={("z", 500): 2.0, ("t2m", SURFACE): None})
        assert table.to_dict() == {"z500": 2.0, "t2m": None}
        assert ObsErrorTable.from_dict(table.to_dict()) == table


class TestMaskSpec:
    """Tests for MaskSpec."""

    @pytest.mark.parametrize("ratio", [-0.1, 1.0, 1.5])
    def test_ratio_bounds(self, ratio):
        with pytest.raises(ValueError):
            MaskSpec(masked_ratio=ratio)

    def test_observed_fraction(self):
        assert MaskSpec(masked_ratio=0.9).observed_fraction == 0.1


def _entry(time, mask):
    mask = np.asarray(mask, dtype=bool).reshape(1, -1)
    return ObsEntry(
        time=time,
        values={("x", SURFACE): np.arange(mask.sum(), dtype=float)},
        masks={("x", SURFACE): mask},
    )


class TestObsSet:
    """Tests for ObsEntry and ObsSet."""

    def test_entry_count_must_match_mask(self):
        with pytest.raises(ValueError):
            ObsEntry(
                time=0,
                values={("x", SURFACE): np.zeros(3)},
                masks={("x", SURFACE): np.ones((1, 4), dtype=bool)},
            )

    def test_entries_sorted_and_unique(self):
        obs = ObsSet(cadence=3, entries=(_entry(6, [1, 0]), _entry(0, [1, 1])))
        assert obs.times() == (0, 6)
        with pytest.raises(ValueError):
            ObsSet(cadence=3, entries=(_entry(0, [1, 0]), _entry(0, [0, 1])))

    def test_window_is_half_open(self):
        obs = ObsSet(cadence=3, entries=tuple(_entry(t, [1, 0]) for t in (0, 3, 6, 9, 12)))
        assert obs.window(0, 12).times() == (0, 3, 6, 9)
        assert obs.window(12, 24).times() == (12,)

    def test_at_and_counts(self):
        obs = ObsSet(cadence=3, entries=(_entry(0, [1, 1, 0]),))
        assert obs.at(0).n_obs == 2
        assert obs.at(3) is None
        assert len(obs) == 1
