"""
Cycling experiment: assimilate, forecast, build the next background.

Backgrounds come from earlier analyses only. A method failure leaves the
background in place as that cycle's analysis and the loop carries on.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence

import numpy as np

from src.domain.entities.cycle import (
    LAUNCH_INTERVAL_HOURS,
    MEDIUM_RANGE_LEADS,
    CycleConfig,
    CycleRecord,
    ForecastLaunch,
)
from src.domain.entities.lead import LeadDecomposition
from src.domain.entities.observations import ObsSet, SlotKey
from src.domain.entities.state import StateField
from src.domain.entities.statistics import Climatology
from src.domain.exceptions import (
    AlignmentError,
    CycleInitializationError,
    DabError,
    DecompositionError,
)
from src.domain.value_objects.da_method import DAMethod
from src.domain.value_objects.record_status import RecordStatus
from src.infrastructure.assimilation.background import perturb_state, slot_stds
from src.infrastructure.assimilation.strategies import AnalysisStrategy
from src.infrastructure.dynamics.aggregation import forecast_hta, greedy_decompose
from src.infrastructure.dynamics.base import DynamicsModel
from src.infrastructure.verification.scores import slot_scores

logger = logging.getLogger(__name__)

INITIAL_LEAD = 24
_INITIAL_PERTURBATION_TAG = 2


def initial_background(
    model: DynamicsModel,
    truth_snapshot: StateField,
    *,
    scales: Mapping[SlotKey, float] | None = None,
    seed: int = 0,
) -> StateField:
    """24 h forecast from the (optionally perturbed) truth 24 h before the first window.

    `scales` holds the absolute noise std of each slot.
    """
    origin = truth_snapshot
    if scales and any(scales.values()):
        origin = perturb_state(
            truth_snapshot, dict(scales), seed=seed, tag=_INITIAL_PERTURBATION_TAG
        )
    return forecast_hta(model, origin, INITIAL_LEAD)


def _run_steps(model: DynamicsModel, state: StateField, steps: Sequence[int]) -> StateField:
    for lead in steps:
        state = model.step(state, lead)
    return state


def build_background(
    analyses: Mapping[int, StateField],
    target: int,
    config: CycleConfig,
    model: DynamicsModel,
) -> tuple[StateField, LeadDecomposition]:
    """Forecast valid at `target` from the history of analyses.

    Without aggregation the latest analysis is forecast with the model's own
    greedy decomposition. With aggregation every analysis within the anchor
    span is a candidate; the one reaching `target` with the fewest model
    calls under the aggregation leads wins, ties going to the most recent.

    Raises:
        CycleInitializationError: No analysis can reach `target`.
    """
    prior = sorted((t for t in analyses if t < target), reverse=True)
    if not prior:
        raise CycleInitializationError(f"No analysis before {target} h to forecast from")

    if not config.htaa.enabled:
        anchor = prior[0]
        try:
            decomposition = greedy_decompose(target - anchor, model.supported_leads)
        except DecompositionError as exc:
            raise CycleInitializationError(
                f"Analysis at {anchor} h cannot reach {target} h: {exc}"
            ) from exc
        return _run_steps(model, analyses[anchor], decomposition.steps), decomposition

    best: tuple[int, LeadDecomposition] | None = None
    for anchor in prior:
        if target - anchor > config.htaa.anchor_span:
            break
        try:
            candidate = greedy_decompose(target - anchor, config.htaa.supported_leads)
        except DecompositionError:
            continue
        if best is None or candidate.invocations < best[1].invocations:
            best = (anchor, candidate)
    if best is None:
        raise CycleInitializationError(
            f"No analysis within {config.htaa.anchor_span} h of {target} h is reachable "
            f"with leads {list(config.htaa.supported_leads)}"
        )
    anchor, decomposition = best
    logger.debug(
        f"Aggregated background for {target} h from {anchor} h with steps {list(decomposition.steps)}"
    )
    return _run_steps(model, analyses[anchor], decomposition.steps), decomposition


def run_cycle(
    model: DynamicsModel,
    truth: Sequence[StateField],
    obs: ObsSet,
    config: CycleConfig,
    strategy: AnalysisStrategy,
    climatology: Climatology | None = None,
) -> list[CycleRecord]:
    """Run config.n_cycles windows and return one record per window.

    Raises:
        AlignmentError: The truth misses the initial snapshot or a window start.
        CycleInitializationError: A background cannot be built.
    """
    if config.n_cycles == 0:
        return []
    truth_by_time = {s.time: s for s in truth}
    starts = [config.window_start(i) for i in range(config.n_cycles)]
    missing = [t for t in [starts[0] - INITIAL_LEAD, *starts] if t not in truth_by_time]
    if missing:
        raise AlignmentError(f"Truth run has no state at {missing[:5]} h")

    scales = None
    if config.initial_perturbation > 0:
        scales = {
            key: config.initial_perturbation * std for key, std in slot_stds(truth).items()
        }
    x_b = initial_background(
        model, truth_by_time[starts[0] - INITIAL_LEAD], scales=scales, seed=config.seed
    )
    invocations = greedy_decompose(INITIAL_LEAD, model.supported_leads).invocations
    keep_span = max(config.htaa.anchor_span, config.window_hours)
    analyses: dict[int, StateField] = {}
    records: list[CycleRecord] = []

    for index, t0 in enumerate(starts):
        if index:
            x_b, decomposition = build_background(analyses, t0, config, model)
            invocations = decomposition.invocations
        window = (t0, t0 + config.window_hours)
        status, error = RecordStatus.OK, None
        diagnostics: dict[str, object] = {}
        try:
            result = strategy.analyze(x_b, obs.window(*window), window)
            analysis = result.analysis
            diagnostics = result.diagnostics.to_dict()
        except (DabError, np.linalg.LinAlgError) as exc:
            logger.warning(f"Cycle {index} ({config.method.value}) failed at {t0} h: {exc}")
            analysis, status, error = x_b, RecordStatus.FAILED, str(exc)

        analyses[t0] = analysis
        for old in [t for t in analyses if t < t0 - keep_span]:
            del analyses[old]

        truth_t0 = truth_by_time[t0]
        records.append(
            CycleRecord(
                index=index,
                window_start=t0,
                method=config.method,
                background=x_b,
                analysis=analysis,
                metrics={
                    "background": slot_scores(x_b, truth_t0, climatology),
                    "analysis": slot_scores(analysis, truth_t0, climatology),
                },
                diagnostics=diagnostics,
                status=status,
                error=error,
                model_invocations=invocations,
            )
        )
    failures = sum(r.failed for r in records)
    logger.info(
        f"Ran {len(records)} {config.method.value} cycles ({failures} failed)"
    )
    return records


def launch_medium_range(
    model: DynamicsModel,
    analysis: StateField,
    truth: Sequence[StateField],
    *,
    leads: Sequence[int] = MEDIUM_RANGE_LEADS,
    climatology: Climatology | None = None,
    method: DAMethod = DAMethod.NONE,
) -> ForecastLaunch:
    """Independent forecasts to every lead; scored where the truth exists."""
    truth_by_time = {s.time: s for s in truth}
    forecasts = []
    metrics = {}
    for lead in leads:
        forecast = analysis if lead == 0 else forecast_hta(model, analysis, lead)
        forecasts.append(forecast)
        valid = truth_by_time.get(forecast.time)
        if valid is not None:
            metrics[lead] = slot_scores(forecast, valid, climatology)
    if len(metrics) < len(forecasts):
        logger.debug(
            f"Launch from {analysis.time} h: truth covers {len(metrics)} of {len(forecasts)} leads"
        )
    return ForecastLaunch(
        initial_time=analysis.time,
        leads=tuple(leads),
        forecasts=tuple(forecasts),
        metrics=metrics,
        method=method,
    )


def schedule_launches(
    records: Sequence[CycleRecord],
    *,
    interval: int = LAUNCH_INTERVAL_HOURS,
    spin_up_cycles: int = 0,
) -> list[CycleRecord]:
    """Records whose analyses start launches: every `interval` hours after spin-up."""
    eligible = [r for r in records if r.index >= spin_up_cycles]
    if not eligible:
        return []
    first = eligible[0].window_start
    return [r for r in eligible if (r.window_start - first) % interval == 0]
