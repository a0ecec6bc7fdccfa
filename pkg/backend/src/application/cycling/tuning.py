"""
Background-error covariance tuning from cycled 3DVar on a training split.

Variances are reset to the background errors the cycle itself produces,
then a grid over variance scale and correlation length picks the B with
the lowest normalized analysis RMSE.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import replace
from itertools import product

import numpy as np

from src.domain.entities.cycle import CycleConfig, CycleRecord
from src.domain.entities.observations import ObsSet
from src.domain.entities.state import StateField
from src.domain.value_objects.da_method import DAMethod
from src.infrastructure.assimilation.background import slot_stds
from src.infrastructure.assimilation.covariances import BackgroundCov, ObsCov
from src.infrastructure.assimilation.strategies import AnalysisContext, build_strategy
from src.infrastructure.assimilation.variational import SolverConfig
from src.infrastructure.dynamics.base import DynamicsModel

from .runner import run_cycle

logger = logging.getLogger(__name__)


def _scored(records: Sequence[CycleRecord], spin_up: int) -> list[CycleRecord]:
    kept = [record for record in records if record.index >= spin_up and not record.failed]
    return kept or [record for record in records if not record.failed]


def _cycle_threedvar(
    model: DynamicsModel,
    truth: Sequence[StateField],
    obs: ObsSet,
    r: ObsCov,
    b: BackgroundCov,
    config: CycleConfig,
    solver: SolverConfig,
) -> list[CycleRecord]:
    context = AnalysisContext(model=model, b=b, r=r, solver=solver, seed=config.seed)
    return run_cycle(model, truth, obs, config, build_strategy(DAMethod.THREEDVAR, context))


def normalized_analysis_rmse(
    records: Sequence[CycleRecord], stds: dict[str, float], spin_up: int
) -> float:
    """Mean over slots of the post-spin-up analysis RMSE divided by the slot std."""
    kept = _scored(records, spin_up)
    if not kept:
        return float("inf")
    ratios = []
    for label, std in stds.items():
        values = [record.score("analysis", label, "rmse") for record in kept]
        values = [v for v in values if v is not None]
        if values and std > 0:
            ratios.append(float(np.mean(values)) / std)
    return float(np.mean(ratios)) if ratios else float("inf")


def tune_background_cov(
    model: DynamicsModel,
    truth: Sequence[StateField],
    obs: ObsSet,
    r: ObsCov,
    b: BackgroundCov,
    config: CycleConfig,
    *,
    solver: SolverConfig | None = None,
    iterations: int = 0,
    scales: Sequence[float] = (1.0,),
    lengths: Sequence[float] = (),
) -> BackgroundCov:
    """Refit B against the background errors of cycled 3DVar.

    Each iteration cycles 3DVar with the current B and replaces every slot
    variance with the mean squared background RMSE after spin-up; a slot
    whose error vanished keeps its variance. The grid then scales the
    variances and swaps the correlation length; the current length stays a
    candidate.
    """
    solver = solver or SolverConfig()
    config = replace(config, method=DAMethod.THREEDVAR)
    grid = b.grid
    slots = list(grid.slots())

    for iteration in range(iterations):
        records = _cycle_threedvar(model, truth, obs, r, b, config, solver)
        kept = _scored(records, config.spin_up_cycles)
        if not kept:
            logger.warning(f"Background tuning iteration {iteration} had no usable cycles")
            break
        variances = dict(b.variances)
        for slot in slots:
            errors = [record.score("background", slot.label, "rmse") for record in kept]
            errors = [e for e in errors if e is not None]
            refit = float(np.mean(np.square(errors))) if errors else 0.0
            if refit > 0:
                variances[slot.key] = refit
        b = b.with_variances(variances)
        logger.info(f"Background tuning iteration {iteration}: variances {b.to_dict()}")

    by_key = slot_stds(truth)
    stds = {slot.label: by_key[slot.key] for slot in slots}
    candidates: list[float | None] = [b.correlation_length]
    candidates += [length for length in lengths if length != b.correlation_length]
    best, best_score = b, float("inf")
    for scale, length in product(scales, candidates):
        candidate = b.scaled(scale)
        if length is not None:
            candidate = candidate.with_variances(candidate.variances, correlation_length=length)
        score = normalized_analysis_rmse(
            _cycle_threedvar(model, truth, obs, r, candidate, config, solver),
            stds,
            config.spin_up_cycles,
        )
        logger.debug(f"Background scale {scale} length {length}: normalized RMSE {score:.4f}")
        if score < best_score:
            best, best_score = candidate, score
    logger.info(
        f"Tuned background covariance: length {best.correlation_length}, "
        f"normalized analysis RMSE {best_score:.4f}"
    )
    return best
