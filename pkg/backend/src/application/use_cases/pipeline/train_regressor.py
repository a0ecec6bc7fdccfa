"""Train increment regressor use case."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from src.domain.entities.regressor import IncrementRegressor
from src.domain.repositories.dataset_repository import IDatasetRepository
from src.infrastructure.assimilation.covariances import ObsCov
from src.infrastructure.assimilation.regressor import fit_increment_regressor
from src.infrastructure.assimilation.training import build_training_samples
from src.infrastructure.config.run_config import RunConfig

from ._shared import (
    REGRESSOR_DOC,
    layout_for,
    load_error_table,
    load_grid,
    load_norm_stats,
    load_obs_set,
    require_series,
)

logger = logging.getLogger(__name__)

TRAIN_SPLIT = "train"


@dataclass(frozen=True)
class TrainRegressorRequest:
    config: RunConfig


@dataclass(frozen=True)
class TrainRegressorResponse:
    regressor: IncrementRegressor
    n_samples: int
    masked_ratio: float


@dataclass
class TrainRegressorUseCase:
    repo: IDatasetRepository

    def execute(self, request: TrainRegressorRequest) -> TrainRegressorResponse:
        config = request.config
        layout = layout_for(config)
        grid = load_grid(self.repo, layout)
        table = load_error_table(self.repo, layout)
        ratio = config.da.regressor.train_mask_ratio
        if ratio is None:
            ratio = config.cycle.mask_ratio

        truth = require_series(self.repo, layout, "truth", TRAIN_SPLIT, grid)
        backgrounds = require_series(self.repo, layout, "background", TRAIN_SPLIT, grid)
        obs = load_obs_set(self.repo, layout, config, TRAIN_SPLIT, ratio, grid, table)
        samples = build_training_samples(
            config.model.build_forecast(),
            truth,
            obs,
            ObsCov(table),
            backgrounds,
            window_hours=config.cycle.window_hours,
            max_samples=config.da.regressor.max_samples,
        )
        regressor = fit_increment_regressor(
            samples,
            load_norm_stats(self.repo, layout),
            innovation_form=config.da.regressor.innovation_form,
        )
        regressor = replace(
            regressor, metadata={**regressor.metadata, "train_mask_ratio": ratio}
        )
        self.repo.save_document(REGRESSOR_DOC, regressor.to_dict())
        logger.info(f"Trained regressor on {len(samples)} samples at mask ratio {ratio}")
        return TrainRegressorResponse(regressor=regressor, n_samples=len(samples), masked_ratio=ratio)
