"""Generate truth use case."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from src.domain.repositories.dataset_repository import IDatasetRepository
from src.domain.services.fields import compute_climatology, compute_norm_stats
from src.infrastructure.config.run_config import RunConfig
from src.infrastructure.osse.truth import SPLITS, run_truth, spin_up, split_series

from ._shared import CLIMATOLOGY_FIELD, MANIFEST_DOC, NORM_STATS_DOC

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenerateTruthRequest:
    config: RunConfig


@dataclass(frozen=True)
class GenerateTruthResponse:
    n_states: int
    split_sizes: dict[str, int]


@dataclass
class GenerateTruthUseCase:
    repo: IDatasetRepository

    def execute(self, request: GenerateTruthRequest) -> GenerateTruthResponse:
        config = request.config
        truth_cfg = config.truth
        model = config.model.build()

        x0 = model.initial_state(truth_cfg.initial_seed)
        start = spin_up(model, x0, truth_cfg.spin_up_hours, truth_cfg.save_every)
        series = run_truth(model, start, truth_cfg.horizon_hours, truth_cfg.save_every)
        splits = split_series(series, truth_cfg.split_fractions)

        self.repo.save_grid(model.grid)
        for split in SPLITS:
            self.repo.save_series("truth", split, splits[split])

        norm_source = splits["train"] or series
        self.repo.save_document(NORM_STATS_DOC, compute_norm_stats(norm_source).to_dict())
        climatology = compute_climatology(splits[config.eval.climatology_split] or series)
        self.repo.save_field(CLIMATOLOGY_FIELD, climatology.as_state())
        self.repo.save_document(
            MANIFEST_DOC,
            {
                "name": config.name,
                "config_sha256": config.sha256,
                "seed": config.seed,
                "model": config.model.type,
                "supported_leads": list(config.model.supported_leads),
                "truth": {
                    "spin_up_hours": truth_cfg.spin_up_hours,
                    "horizon_hours": truth_cfg.horizon_hours,
                    "save_every": truth_cfg.save_every,
                    "split_fractions": list(truth_cfg.split_fractions),
                },
            },
        )
        sizes = {split: len(states) for split, states in splits.items()}
        logger.info(f"Generated {len(series)} truth states for {config.name}: {sizes}")
        return GenerateTruthResponse(n_states=len(series), split_sizes=sizes)
