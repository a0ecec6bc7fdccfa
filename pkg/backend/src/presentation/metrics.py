"""Prometheus metrics for batch runs."""

from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path

from prometheus_client import REGISTRY, Counter, write_to_textfile

from src.domain.entities.cycle import CycleRecord

MODEL_INVOCATIONS_TOTAL = Counter(
    "dab_model_invocations_total",
    "Total number of model step calls spent on cycle backgrounds.",
)

CYCLES_TOTAL = Counter(
    "dab_cycles_total",
    "Total number of assimilation cycles run.",
    ["method"],
)

CYCLE_FAILURES_TOTAL = Counter(
    "dab_cycle_failures_total",
    "Total number of cycles whose analysis method failed.",
    ["method"],
)

SOLVER_ITERATIONS_TOTAL = Counter(
    "dab_solver_iterations_total",
    "Total number of minimizer iterations.",
    ["method"],
)


def observe_cycles(records: Iterable[CycleRecord]) -> None:
    for record in records:
        method = record.method.value
        CYCLES_TOTAL.labels(method=method).inc()
        MODEL_INVOCATIONS_TOTAL.inc(record.model_invocations)
        if record.failed:
            CYCLE_FAILURES_TOTAL.labels(method=method).inc()
        iterations = record.diagnostics.get("iterations", 0)
        if iterations:
            SOLVER_ITERATIONS_TOTAL.labels(method=method).inc(iterations)


def write_textfile(path: str | Path) -> None:
    """Dump the registry in text exposition format for a textfile collector."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    write_to_textfile(str(path), REGISTRY)
