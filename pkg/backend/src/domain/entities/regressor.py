"""
IncrementRegressor entity.

A pointwise linear map from four feature channels per slot (background,
mask-filled observations, mask indicator, observation-term gradient) to one
analysis-increment channel per slot. Coefficients and bias are shared by
every grid cell and act on normalized fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.domain.entities.state import FloatArray
from src.domain.exceptions import DimensionError

FEATURE_KINDS = ("background", "observation", "mask", "gradient")


@dataclass(frozen=True, eq=False)
class IncrementRegressor:
    """Pointwise linear increment model.

    Attributes:
        slot_labels: Output slots, e.g. ("z500", "t850", "t2m").
        coefficients: (S, 4*S) matrix; input channel k*S + s is feature kind k
            of slot s, in FEATURE_KINDS order.
        bias: (S,) vector.
        metadata: Training losses and sample counts.
    """

    slot_labels: tuple[str, ...]
    coefficients: FloatArray
    bias: FloatArray
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.slot_labels)
        coefficients = np.array(self.coefficients, dtype=np.float64)
        bias = np.array(self.bias, dtype=np.float64)
        if coefficients.shape != (n, len(FEATURE_KINDS) * n):
            raise DimensionError(
                f"Coefficient shape {coefficients.shape} does not fit {n} slots"
            )
        if bias.shape != (n,):
            raise DimensionError(f"Bias shape {bias.shape} does not fit {n} slots")
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "bias", bias)

    @classmethod
    def zeros(cls, slot_labels: tuple[str, ...]) -> IncrementRegressor:
        n = len(slot_labels)
        return cls(
            slot_labels=slot_labels,
            coefficients=np.zeros((n, len(FEATURE_KINDS) * n)),
            bias=np.zeros(n),
        )

    @property
    def n_slots(self) -> int:
        return len(self.slot_labels)

    def coefficient(self, output: str, kind: str, source: str | None = None) -> float:
        """Coefficient linking feature `kind` of slot `source` to `output`."""
        out = self.slot_labels.index(output)
        src = self.slot_labels.index(source or output)
        return float(self.coefficients[out, FEATURE_KINDS.index(kind) * self.n_slots + src])

    def predict(self, features: FloatArray) -> FloatArray:
        """Map a (4*S, n) feature matrix to a (S, n) increment matrix."""
        if features.shape[0] != self.coefficients.shape[1]:
            raise DimensionError(
                f"Expected {self.coefficients.shape[1]} feature channels, "
                f"got {features.shape[0]}"
            )
        return self.coefficients @ features + self.bias[:, None]

    def to_dict(self) -> dict[str, Any]:
        return {
            "slot_labels": list(self.slot_labels),
            "feature_kinds": list(FEATURE_KINDS),
            "coefficients": self.coefficients.tolist(),
            "bias": self.bias.tolist(),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> IncrementRegressor:
        return cls(
            slot_labels=tuple(data["slot_labels"]),
            coefficients=np.asarray(data["coefficients"], dtype=np.float64),
            bias=np.asarray(data["bias"], dtype=np.float64),
            metadata=dict(data.get("metadata", {})),
        )
