"""Grid topology value object."""

from __future__ import annotations

from enum import Enum


class Topology(Enum):
    """Horizontal geometry used for distances between grid cells.

    SPHERE grids measure great-circle distance in kilometres; RING grids
    (Lorenz96) measure cyclic index distance along longitude.
    """

    SPHERE = "sphere"
    RING = "ring"

    @classmethod
    def from_string(cls, value: str) -> Topology:
        """Parse topology from string."""
        value_lower = value.lower().strip()
        for topology in cls:
            if topology.value == value_lower:
                return topology
        valid = [t.value for t in cls]
        raise ValueError(f"Invalid topology: '{value}'. Valid: {valid}")

    def __str__(self) -> str:
        return self.value
