"""LeadDecomposition entity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class LeadDecomposition:
    """A target lead expressed as a sequence of supported model leads."""

    target_lead: int
    steps: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.steps) != self.target_lead:
            raise ValueError(
                f"Steps {list(self.steps)} do not sum to target {self.target_lead}"
            )

    @property
    def invocations(self) -> int:
        """Number of model calls the decomposition costs."""
        return len(self.steps)

    def to_dict(self) -> dict[str, Any]:
        return {"target_lead": self.target_lead, "steps": list(self.steps)}
