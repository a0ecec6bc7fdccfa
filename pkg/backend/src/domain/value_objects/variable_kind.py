"""VariableKind value object."""

from __future__ import annotations

from enum import Enum


class VariableKind(Enum):
    """Vertical placement of a physical variable."""

    UPPER_AIR = "upper_air"
    SURFACE = "surface"

    @classmethod
    def from_string(cls, value: str) -> VariableKind:
        """Parse kind from string."""
        value_lower = value.lower().strip().replace("-", "_")
        for kind in cls:
            if kind.value == value_lower:
                return kind
        valid = [k.value for k in cls]
        raise ValueError(f"Invalid variable kind: '{value}'. Valid: {valid}")

    def __str__(self) -> str:
        return self.value
