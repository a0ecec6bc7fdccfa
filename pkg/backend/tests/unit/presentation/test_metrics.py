"""Tests for the Prometheus counters of batch runs."""

from __future__ import annotations

from prometheus_client import REGISTRY

from src.domain.entities.cycle import CycleRecord
from src.domain.entities.grid import GridSpec
from src.domain.entities.state import StateField
from src.domain.value_objects import DAMethod, RecordStatus
from src.presentation.metrics import observe_cycles, write_textfile


def _sample(name: str, **labels: str) -> float:
    return REGISTRY.get_sample_value(name, labels or None) or 0.0


def _record(index: int, status: RecordStatus, iterations: int) -> CycleRecord:
    state = StateField.zeros(GridSpec.ring(8))
    return CycleRecord(
        index=index,
        window_start=24 + 12 * index,
        method=DAMethod.FOURDVAR,
        background=state,
        analysis=state,
        diagnostics={"iterations": iterations},
        status=status,
        model_invocations=2,
    )


def test_observe_cycles_counts_runs_failures_and_calls() -> None:
    cycles = _sample("dab_cycles_total", method="4dvar")
    failures = _sample("dab_cycle_failures_total", method="4dvar")
    iterations = _sample("dab_solver_iterations_total", method="4dvar")
    calls = _sample("dab_model_invocations_total")

    observe_cycles(
        [
            _record(0, RecordStatus.OK, 7),
            _record(1, RecordStatus.FAILED, 0),
            _record(2, RecordStatus.OK, 5),
        ]
    )

    assert _sample("dab_cycles_total", method="4dvar") == cycles + 3
    assert _sample("dab_cycle_failures_total", method="4dvar") == failures + 1
    assert _sample("dab_solver_iterations_total", method="4dvar") == iterations + 12
    assert _sample("dab_model_invocations_total") == calls + 6


def test_write_textfile(tmp_path) -> None:
    path = tmp_path / "metrics" / "dab.prom"
    write_textfile(path)
    assert "dab_cycles_total" in path.read_text()
