"""
Cycling experiment entities.

CycleConfig describes one experiment; CycleRecord and ForecastLaunch are its
append-only outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from src.domain.entities.state import StateField
from src.domain.value_objects.da_method import DAMethod
from src.domain.value_objects.record_status import RecordStatus

SlotScores = dict[str, dict[str, float]]

MEDIUM_RANGE_LEADS = tuple(range(0, 289, 6))
LAUNCH_INTERVAL_HOURS = 336


@dataclass(frozen=True)
class HTAAConfig:
    """Hierarchical temporal aggregation for background construction."""

    enabled: bool = False
    supported_leads: tuple[int, ...] = (6, 12, 24)
    anchor_span: int = 24

    def __post_init__(self) -> None:
        if self.anchor_span <= 0:
            raise ValueError("anchor_span must be > 0")
        if not self.supported_leads or min(self.supported_leads) <= 0:
            raise ValueError("supported_leads must be non-empty and positive")

    def to_dict(self) -> dict[str, Any]:
        return {
            "enabled": self.enabled,
            "supported_leads": list(self.supported_leads),
            "anchor_span": self.anchor_span,
        }


@dataclass(frozen=True)
class CycleConfig:
    """Settings of a cycling experiment.

    Attributes:
        window_hours: Assimilation window length; analyses every window.
        obs_cadence_hours: Spacing of observation times.
        n_cycles: Number of windows to assimilate.
        method: Analysis method.
        htaa: Background aggregation settings.
        spin_up_cycles: Leading cycles excluded from summaries.
        start_time: Start of the first window; truth must exist 24 h earlier.
        initial_perturbation: Noise added to the truth snapshot that seeds
            the first background, as a fraction of each slot's climatological
            std over the truth run.
        seed: Seed for the initial perturbation and ensemble methods.
    """

    window_hours: int = 12
    obs_cadence_hours: int = 3
    n_cycles: int = 0
    method: DAMethod = DAMethod.NONE
    htaa: HTAAConfig = field(default_factory=HTAAConfig)
    spin_up_cycles: int = 10
    start_time: int = 24
    initial_perturbation: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.window_hours <= 0 or self.obs_cadence_hours <= 0:
            raise ValueError("window_hours and obs_cadence_hours must be > 0")
        if self.window_hours % self.obs_cadence_hours:
            raise ValueError("window_hours must be a multiple of obs_cadence_hours")
        if self.n_cycles < 0 or self.spin_up_cycles < 0:
            raise ValueError("n_cycles and spin_up_cycles must be >= 0")
        if self.initial_perturbation < 0:
            raise ValueError("initial_perturbation must be >= 0")

    def window_start(self, index: int) -> int:
        return self.start_time + index * self.window_hours

    def to_dict(self) -> dict[str, Any]:
        return {
            "window_hours": self.window_hours,
            "obs_cadence_hours": self.obs_cadence_hours,
            "n_cycles": self.n_cycles,
            "method": self.method.value,
            "htaa": self.htaa.to_dict(),
            "spin_up_cycles": self.spin_up_cycles,
            "start_time": self.start_time,
            "initial_perturbation": self.initial_perturbation,
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class CycleRecord:
    """One assimilation cycle.

    metrics maps "background"/"analysis" to per-slot scores, e.g.
    metrics["analysis"]["z500"]["rmse"].
    """

    index: int
    window_start: int
    method: DAMethod
    background: StateField
    analysis: StateField
    metrics: dict[str, SlotScores] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)
    status: RecordStatus = RecordStatus.OK
    error: str | None = None
    model_invocations: int = 0

    @property
    def failed(self) -> bool:
        return self.status is RecordStatus.FAILED

    def score(self, field_name: str, label: str, metric: str) -> float | None:
        return self.metrics.get(field_name, {}).get(label, {}).get(metric)

    def to_dict(self) -> dict[str, Any]:
        """JSON document without the state arrays (they live in containers)."""
        return {
            "index": self.index,
            "window_start": self.window_start,
            "method": self.method.value,
            "metrics": self.metrics,
            "diagnostics": self.diagnostics,
            "status": self.status.value,
            "error": self.error,
            "model_invocations": self.model_invocations,
        }

    @classmethod
    def from_dict(
        cls, data: dict[str, Any], background: StateField, analysis: StateField
    ) -> CycleRecord:
        return cls(
            index=int(data["index"]),
            window_start=int(data["window_start"]),
            method=DAMethod.from_string(data["method"]),
            background=background,
            analysis=analysis,
            metrics=data.get("metrics", {}),
            diagnostics=data.get("diagnostics", {}),
            status=RecordStatus.from_string(data.get("status", "ok")),
            error=data.get("error"),
            model_invocations=int(data.get("model_invocations", 0)),
        )


@dataclass(frozen=True, eq=False)
class ForecastLaunch:
    """Medium-range forecasts from one analysis, one state per lead."""

    initial_time: int
    leads: tuple[int, ...]
    forecasts: tuple[StateField, ...]
    metrics: dict[int, SlotScores] = field(default_factory=dict)
    method: DAMethod = DAMethod.NONE

    def __post_init__(self) -> None:
        if len(self.leads) != len(self.forecasts):
            raise ValueError("ForecastLaunch needs one forecast per lead.")

    def score(self, lead: int, label: str, metric: str) -> float | None:
        return self.metrics.get(lead, {}).get(label, {}).get(metric)

    def to_dict(self) -> dict[str, Any]:
        return {
            "initial_time": self.initial_time,
            "method": self.method.value,
            "leads": list(self.leads),
            "metrics": {str(lead): scores for lead, scores in self.metrics.items()},
        }
