"""SolverExitReason value object."""

from __future__ import annotations

from enum import Enum


class SolverExitReason(Enum):
    """Why an analysis solver stopped."""

    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    STALLED = "stalled"
    CLOSED_FORM = "closed_form"
    PASSTHROUGH = "passthrough"

    @classmethod
    def from_string(cls, value: str) -> SolverExitReason:
        """Parse exit reason from string."""
        value_lower = value.lower().strip()
        for reason in cls:
            if reason.value == value_lower:
                return reason
        valid = [r.value for r in cls]
        raise ValueError(f"Invalid solver exit reason: '{value}'. Valid: {valid}")

    def __str__(self) -> str:
        return self.value
