"""Generate observations use case."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from src.application.cycling.tuning import tune_background_cov
from src.domain.entities.grid import GridSpec
from src.domain.entities.observations import ObsErrorTable
from src.domain.entities.state import StateField
from src.domain.repositories.dataset_repository import IDatasetRepository
from src.domain.value_objects.da_method import DAMethod
from src.infrastructure.assimilation.background import estimate_background_cov
from src.infrastructure.assimilation.covariances import BackgroundCov, ObsCov
from src.infrastructure.assimilation.training import training_backgrounds
from src.infrastructure.config.run_config import RunConfig
from src.infrastructure.osse.observations import (
    masks_as_array,
    observation_masks,
    select_cadence,
    simulate_noisy_fields,
)
from src.infrastructure.osse.truth import SPLITS

from ._shared import (
    BACKGROUND_COV_DOC,
    OBS_ERRORS_DOC,
    layout_for,
    load_grid,
    load_obs_set,
    require_series,
)
from .run_cycle_experiment import cycle_config_for, plan_cycles

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenerateObservationsRequest:
    config: RunConfig


@dataclass(frozen=True)
class GenerateObservationsResponse:
    n_obs_times: dict[str, int]
    observed_fractions: tuple[float, ...]


@dataclass
class GenerateObservationsUseCase:
    repo: IDatasetRepository

    def execute(self, request: GenerateObservationsRequest) -> GenerateObservationsResponse:
        config = request.config
        layout = layout_for(config)
        grid = load_grid(self.repo, layout)
        table = config.osse.error_table().for_grid(grid)
        self.repo.save_document(OBS_ERRORS_DOC, table.to_dict())
        forecast_model = config.model.build_forecast()
        cadence = config.osse.cadence_hours

        counts: dict[str, int] = {}
        for split in SPLITS:
            truth = require_series(self.repo, layout, "truth", split, grid)
            selected = select_cadence(truth, cadence)
            noisy = simulate_noisy_fields(selected, table, config.osse.noise_seed)
            self.repo.save_series("obs", split, noisy)
            times = [s.time for s in selected]
            for ratio in config.osse.mask_ratios:
                spec = config.osse.mask_spec(ratio)
                masks = [masks_as_array(grid, observation_masks(grid, table, spec, t)) for t in times]
                self.repo.save_masks(spec.observed_fraction, split, times, masks)
            backgrounds = training_backgrounds(
                forecast_model,
                truth,
                window_hours=config.cycle.window_hours,
                perturbation_scale=config.da.regressor.perturbation_scale,
                seed=config.seed,
            )
            self.repo.save_series("background", split, backgrounds)
            counts[split] = len(selected)

        train_truth = require_series(self.repo, layout, "truth", "train", grid)
        bg = config.da.background
        b = estimate_background_cov(
            forecast_model,
            train_truth,
            lead=bg.lead,
            perturbation_scale=bg.perturbation_scale,
            variance_scale=bg.variance_scale,
            seed=config.seed,
            max_samples=bg.max_samples,
            correlation_length=bg.correlation_length,
        )
        if bg.tuning_cycles > 0:
            b = self._tune(config, grid, table, train_truth, b)
        self.repo.save_document(BACKGROUND_COV_DOC, b.to_dict())
        fractions = tuple(round(1.0 - r, 10) for r in config.osse.mask_ratios)
        logger.info(f"Generated observations for {config.name}: {counts}, fractions {fractions}")
        return GenerateObservationsResponse(n_obs_times=counts, observed_fractions=fractions)

    def _tune(
        self,
        config: RunConfig,
        grid: GridSpec,
        table: ObsErrorTable,
        train_truth: list[StateField],
        b: BackgroundCov,
    ) -> BackgroundCov:
        bg = config.da.background
        layout = layout_for(config)
        obs = load_obs_set(self.repo, layout, config, "train", config.cycle.mask_ratio, grid, table)
        tuning = replace(config, cycle=replace(config.cycle, n_cycles=bg.tuning_cycles))
        start, n_cycles = plan_cycles(tuning, train_truth)
        logger.info(f"Tuning the background covariance over {n_cycles} training cycles")
        return tune_background_cov(
            config.model.build_forecast(),
            train_truth,
            obs,
            ObsCov(table),
            b,
            cycle_config_for(config, DAMethod.THREEDVAR, start, n_cycles),
            solver=config.da.solver,
            iterations=bg.tuning_iterations,
            scales=bg.tuning_scales,
            lengths=bg.tuning_lengths,
        )
