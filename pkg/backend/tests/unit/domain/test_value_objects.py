"""
Unit tests for domain value objects.
"""

import pytest

from src.domain.value_objects import (
    DAMethod,
    RecordStatus,
    SolverExitReason,
    Topology,
    VariableKind,
)


class TestDAMethod:
    """Tests for DAMethod."""

    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("3dvar", DAMethod.THREEDVAR),
            (" 4DVar ", DAMethod.FOURDVAR),
            ("EnKF", DAMethod.ENKF),
            ("none", DAMethod.NONE),
            ("regressor", DAMethod.REGRESSOR),
        ],
    )
    def test_from_string(self, text, expected):
        assert DAMethod.from_string(text) is expected

    def test_from_string_invalid(self):
        with pytest.raises(ValueError, match="Invalid DA method"):
            DAMethod.from_string("optimal-interpolation")

    def test_uses_ensemble(self):
        assert DAMethod.ENKF.uses_ensemble
        assert DAMethod.HYBRID.uses_ensemble
        assert not DAMethod.FOURDVAR.uses_ensemble

    def test_str(self):
        assert str(DAMethod.THREEDVAR) == "3dvar"


def test_variable_kind_accepts_hyphen():
    assert VariableKind.from_string("upper-air") is VariableKind.UPPER_AIR


@pytest.mark.parametrize(
    ("enum_cls", "text"),
    [
        (RecordStatus, "ok"),
        (RecordStatus, "failed"),
        (SolverExitReason, "max_iterations"),
        (SolverExitReason, "passthrough"),
        (Topology, "ring"),
        (VariableKind, "surface"),
    ],
)
def test_string_round_trip(enum_cls, text):
    assert str(enum_cls.from_string(text)) == text


def test_invalid_topology():
    with pytest.raises(ValueError, match="Invalid topology"):
        Topology.from_string("torus")
