"""DAMethod value object."""

from __future__ import annotations

from enum import Enum


class DAMethod(Enum):
    """Analysis method used by a cycling experiment.

    NONE is the free run: the background is passed through as the analysis.
    """

    NONE = "none"
    THREEDVAR = "3dvar"
    FOURDVAR = "4dvar"
    ENKF = "enkf"
    HYBRID = "hybrid"
    REGRESSOR = "regressor"

    @classmethod
    def from_string(cls, value: str) -> DAMethod:
        """Parse method tag from string."""
        value_lower = value.lower().strip()
        for method in cls:
            if method.value == value_lower:
                return method
        valid = [m.value for m in cls]
        raise ValueError(f"Invalid DA method: '{value}'. Valid: {valid}")

    @property
    def uses_ensemble(self) -> bool:
        return self in (DAMethod.ENKF, DAMethod.HYBRID)

    def __str__(self) -> str:
        return self.value
