"""Shared helpers for pipeline use cases."""

from __future__ import annotations

from pathlib import Path

from src.domain.entities.grid import GridSpec
from src.domain.entities.observations import ObsErrorTable, ObsSet
from src.domain.entities.regressor import IncrementRegressor
from src.domain.entities.state import StateField
from src.domain.entities.statistics import Climatology, NormStats
from src.domain.exceptions import FormatError, MissingArtifactError
from src.domain.repositories.dataset_repository import IDatasetRepository
from src.infrastructure.assimilation.covariances import BackgroundCov
from src.infrastructure.config.run_config import RunConfig
from src.infrastructure.osse.observations import obs_set_from_arrays
from src.infrastructure.persistence.files.layout import DatasetLayout

GRID_DOC = "grid"
NORM_STATS_DOC = "norm_stats"
OBS_ERRORS_DOC = "obs_errors"
MANIFEST_DOC = "run_manifest"
REGRESSOR_DOC = "regressor"
BACKGROUND_COV_DOC = "background_cov"
CLIMATOLOGY_FIELD = "climatology"


def layout_for(config: RunConfig) -> DatasetLayout:
    return DatasetLayout(root=config.output.root, shard_hours=config.output.shard_hours)


def require_series(
    repo: IDatasetRepository, layout: DatasetLayout, kind: str, split: str, grid: GridSpec
) -> list[StateField]:
    """Load a stored series or name the directory an earlier step should have written."""
    if not repo.has_series(kind, split):
        directory = {
            "truth": layout.truth_dir,
            "background": layout.background_dir,
            "obs": layout.obs_dir,
        }[kind](split)
        raise MissingArtifactError(f"No {kind} data for split '{split}'", path=str(directory))
    return repo.load_series(kind, split, grid)


def require_document(repo: IDatasetRepository, layout: DatasetLayout, name: str) -> dict:
    if not repo.has_document(name):
        raise MissingArtifactError(
            f"Missing {name} sidecar", path=str(layout.root / f"{name}.json")
        )
    return repo.load_document(name)


def load_grid(repo: IDatasetRepository, layout: DatasetLayout) -> GridSpec:
    require_document(repo, layout, GRID_DOC)
    return repo.load_grid()


def load_error_table(repo: IDatasetRepository, layout: DatasetLayout) -> ObsErrorTable:
    return ObsErrorTable.from_dict(require_document(repo, layout, OBS_ERRORS_DOC))


def load_norm_stats(repo: IDatasetRepository, layout: DatasetLayout) -> NormStats:
    return NormStats.from_dict(require_document(repo, layout, NORM_STATS_DOC))


def load_background_cov(
    repo: IDatasetRepository, layout: DatasetLayout, grid: GridSpec
) -> BackgroundCov:
    return BackgroundCov.from_dict(grid, require_document(repo, layout, BACKGROUND_COV_DOC))


def load_regressor(repo: IDatasetRepository, layout: DatasetLayout) -> IncrementRegressor | None:
    if not repo.has_document(REGRESSOR_DOC):
        return None
    return IncrementRegressor.from_dict(repo.load_document(REGRESSOR_DOC))


def load_climatology(
    repo: IDatasetRepository, layout: DatasetLayout, grid: GridSpec
) -> Climatology:
    path = layout.climatology_path
    if not Path(path).is_file():
        raise MissingArtifactError("Missing climatology", path=str(path))
    return Climatology(grid=grid, values=repo.load_field(CLIMATOLOGY_FIELD, grid).values)


def load_obs_set(
    repo: IDatasetRepository,
    layout: DatasetLayout,
    config: RunConfig,
    split: str,
    masked_ratio: float,
    grid: GridSpec,
    table: ObsErrorTable,
) -> ObsSet:
    """Stored noisy fields sampled through the stored masks of one ratio."""
    noisy = require_series(repo, layout, "obs", split, grid)
    observed_fraction = round(1.0 - masked_ratio, 10)
    mask_dir = layout.obsmask_dir(observed_fraction, split)
    if not mask_dir.is_dir():
        raise MissingArtifactError(f"No masks for mask ratio {masked_ratio}", path=str(mask_dir))
    times, masks = repo.load_masks(observed_fraction, split)
    if times != [s.time for s in noisy]:
        raise FormatError(f"Mask times in {mask_dir} do not match the stored observations")
    return obs_set_from_arrays(noisy, masks, table, config.osse.cadence_hours)


def eval_labels(config: RunConfig, grid: GridSpec) -> list[str]:
    """Configured evaluation slots, or every slot of the grid."""
    labels = list(config.eval.variables) or [s.label for s in grid.slots()]
    for label in labels:
        grid.slot_by_label(label)
    return labels
