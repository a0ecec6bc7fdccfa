"""
AnalysisResult entity.

An analysis state plus the diagnostics of the solver that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from src.domain.entities.ensemble import EnsembleState
from src.domain.entities.state import FloatArray, StateField
from src.domain.value_objects.solver_exit import SolverExitReason


@dataclass(frozen=True)
class SolverDiagnostics:
    """Cost trajectory J^(i), gradient norms and termination details."""

    costs: tuple[float, ...] = ()
    grad_norms: tuple[float, ...] = ()
    iterations: int = 0
    exit_reason: SolverExitReason = SolverExitReason.CLOSED_FORM
    extra: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "costs": list(self.costs),
            "grad_norms": list(self.grad_norms),
            "iterations": self.iterations,
            "exit_reason": self.exit_reason.value,
            "extra": dict(self.extra),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SolverDiagnostics:
        return cls(
            costs=tuple(float(c) for c in data.get("costs", [])),
            grad_norms=tuple(float(g) for g in data.get("grad_norms", [])),
            iterations=int(data.get("iterations", 0)),
            exit_reason=SolverExitReason.from_string(
                data.get("exit_reason", "closed_form")
            ),
            extra={k: float(v) for k, v in data.get("extra", {}).items()},
        )


@dataclass(frozen=True, eq=False)
class AnalysisResult:
    """x^a with diagnostics; KF results carry P^a, EnKF results the ensemble."""

    analysis: StateField
    diagnostics: SolverDiagnostics = field(default_factory=SolverDiagnostics)
    covariance: FloatArray | None = None
    ensemble: EnsembleState | None = None
