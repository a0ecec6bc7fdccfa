"""
On-disk dataset layout.

    <root>/
      grid.json  norm_stats.json  obs_errors.json  climatology.dab
      run_manifest.json  regressor.json  background_cov.json
      truth/<split>/        times.json + shard_NNNN.dab
      background/<split>/   24 h backgrounds from perturbed truth
      obs/<split>/          noisy observation fields on every cell
      obsmask/partial_<observed fraction>/<split>/   observation masks
      experiments/
        records/<method>.jsonl  analyses/<method>.dab  backgrounds/<method>.dab
        forecasts/<method>.jsonl  forecasts/<method>/<initial time>.dab
        metrics/*.csv  report.txt
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from src.infrastructure.osse.truth import SPLITS

SHARD_HOURS = 720


def ratio_dirname(observed_fraction: float) -> str:
    """partial_0.1 for 10 % of cells observed (90 % masked)."""
    return f"partial_{observed_fraction:g}"


@dataclass(frozen=True)
class DatasetLayout:
    root: Path
    shard_hours: int = SHARD_HOURS

    def __post_init__(self) -> None:
        object.__setattr__(self, "root", Path(self.root))
        if self.shard_hours <= 0:
            raise ValueError("shard_hours must be > 0")

    # Sidecars.

    @property
    def grid_path(self) -> Path:
        return self.root / "grid.json"

    @property
    def norm_stats_path(self) -> Path:
        return self.root / "norm_stats.json"

    @property
    def obs_errors_path(self) -> Path:
        return self.root / "obs_errors.json"

    @property
    def climatology_path(self) -> Path:
        return self.root / "climatology.dab"

    @property
    def manifest_path(self) -> Path:
        return self.root / "run_manifest.json"

    @property
    def regressor_path(self) -> Path:
        return self.root / "regressor.json"

    @property
    def background_cov_path(self) -> Path:
        return self.root / "background_cov.json"

    # Time series.

    def truth_dir(self, split: str) -> Path:
        return self.root / "truth" / _checked(split)

    def background_dir(self, split: str) -> Path:
        return self.root / "background" / _checked(split)

    def obs_dir(self, split: str) -> Path:
        return self.root / "obs" / _checked(split)

    def obsmask_dir(self, observed_fraction: float, split: str) -> Path:
        return self.root / "obsmask" / ratio_dirname(observed_fraction) / _checked(split)

    def shard_name(self, time: int) -> str:
        return f"shard_{time // self.shard_hours:04d}.dab"

    # Experiment products.

    @property
    def experiments_dir(self) -> Path:
        return self.root / "experiments"

    def records_path(self, method: str) -> Path:
        return self.experiments_dir / "records" / f"{method}.jsonl"

    def analyses_path(self, method: str) -> Path:
        return self.experiments_dir / "analyses" / f"{method}.dab"

    def backgrounds_path(self, method: str) -> Path:
        return self.experiments_dir / "backgrounds" / f"{method}.dab"

    def forecasts_path(self, method: str) -> Path:
        return self.experiments_dir / "forecasts" / f"{method}.jsonl"

    def forecast_states_path(self, method: str, initial_time: int) -> Path:
        return self.experiments_dir / "forecasts" / method / f"{initial_time:08d}.dab"

    def metrics_path(self, name: str) -> Path:
        return self.experiments_dir / "metrics" / f"{name}.csv"

    @property
    def report_path(self) -> Path:
        return self.experiments_dir / "report.txt"

    def recorded_methods(self) -> list[str]:
        records = self.experiments_dir / "records"
        if not records.is_dir():
            return []
        return sorted(p.stem for p in records.glob("*.jsonl"))


def _checked(split: str) -> str:
    if split not in SPLITS:
        raise ValueError(f"Unknown split '{split}'. Valid: {list(SPLITS)}")
    return split
