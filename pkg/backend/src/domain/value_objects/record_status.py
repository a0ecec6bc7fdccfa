"""RecordStatus value object."""

from __future__ import annotations

from enum import Enum


class RecordStatus(Enum):
    """Outcome of one assimilation cycle."""

    OK = "ok"
    FAILED = "failed"

    @classmethod
    def from_string(cls, value: str) -> RecordStatus:
        """Parse status from string."""
        value_lower = value.lower().strip()
        for status in cls:
            if status.value == value_lower:
                return status
        valid = [s.value for s in cls]
        raise ValueError(f"Invalid record status: '{value}'. Valid: {valid}")

    def __str__(self) -> str:
        return self.value
