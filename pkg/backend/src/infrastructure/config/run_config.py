"""
Run configuration: one frozen section per pipeline stage.

Sections are built from a schema-validated mapping; every field has a
default except the model type and the truth horizon.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from src.domain.entities.cycle import HTAAConfig
from src.domain.entities.grid import SURFACE, GridSpec, LevelLabel, VariableSpec
from src.domain.entities.observations import MaskSpec, ObsErrorTable
from src.domain.value_objects.da_method import DAMethod
from src.domain.value_objects.variable_kind import VariableKind
from src.infrastructure.assimilation.variational import SolverConfig
from src.infrastructure.dynamics.advection import LatLonAdvectionModel
from src.infrastructure.dynamics.base import DynamicsModel
from src.infrastructure.dynamics.lorenz96 import Lorenz96Model

from .exceptions import ConfigValidationError


@dataclass(frozen=True)
class ModelSection:
    type: str
    supported_leads: tuple[int, ...] = (6, 12, 24)
    params: dict[str, Any] = field(default_factory=dict)
    twin: dict[str, Any] = field(default_factory=dict)

    def _advection_grid(self) -> tuple[GridSpec, dict[str, tuple[float, float]]]:
        specs = self.params["variables"]
        variables = tuple(
            VariableSpec(
                name=v["name"],
                units=v.get("units", ""),
                kind=VariableKind.from_string(v.get("kind", "upper_air")),
                obs_sigma=v.get("obs_sigma"),
            )
            for v in specs
        )
        all_surface = all(v.kind is VariableKind.SURFACE for v in variables)
        levels: tuple[LevelLabel, ...] = tuple(
            self.params.get("levels", [SURFACE] if all_surface else [500])
        )
        grid = GridSpec.regular(
            int(self.params.get("n_lat", 16)), int(self.params.get("n_lon", 32)), levels, variables
        )
        climate = {}
        for spec in specs:
            for slot in grid.slots():
                if slot.variable == spec["name"]:
                    climate[slot.label] = (
                        float(spec.get("mean", 0.0)),
                        float(spec.get("amplitude", 1.0)),
                    )
        return grid, climate

    def build(self) -> DynamicsModel:
        """The model generating the truth."""
        leads = tuple(self.supported_leads)
        if self.type == "lorenz96":
            return Lorenz96Model(
                m=int(self.params.get("m", 40)),
                forcing=float(self.params.get("forcing", 8.0)),
                dt_internal=float(self.params.get("dt_internal", 3.0)),
                leads=leads,
                call_smoothing=float(self.params.get("call_smoothing", 0.0)),
            )
        grid, climate = self._advection_grid()
        return LatLonAdvectionModel(
            lat_lon_grid=grid,
            omega=float(self.params.get("omega", 15.0)),
            kappa=float(self.params.get("kappa", 0.0)),
            leads=leads,
            climate=climate,
        )

    def build_forecast(self) -> DynamicsModel:
        """The model used for backgrounds and forecasts (the twin, if any)."""
        model = self.build()
        return model.perturbed(**self.twin) if self.twin else model


@dataclass(frozen=True)
class TruthSection:
    horizon_hours: int
    spin_up_hours: int = 1440
    save_every: int = 3
    split_fractions: tuple[float, float, float] = (0.7, 0.1, 0.2)
    initial_seed: int = 0


@dataclass(frozen=True)
class OsseSection:
    cadence_hours: int = 3
    mask_ratios: tuple[float, ...] = (0.9,)
    regenerate_each_time: bool = True
    mask_seed: int = 0
    noise_seed: int = 0
    obs_errors: dict[str, float | None] = field(default_factory=dict)
    obs_errors_path: Path | None = None

    def error_table(self) -> ObsErrorTable:
        """Standard table with the configured overrides, keyed by slot label."""
        return ObsErrorTable.standard().with_overrides(self.obs_errors)

    def mask_spec(self, masked_ratio: float) -> MaskSpec:
        return MaskSpec(
            masked_ratio=masked_ratio,
            seed=self.mask_seed,
            regenerate_each_time=self.regenerate_each_time,
        )


@dataclass(frozen=True)
class BackgroundSection:
    lead: int = 24
    perturbation_scale: float = 0.1
    variance_scale: float = 1.0
    max_samples: int | None = None
    correlation_length: float | None = None
    tuning_cycles: int = 0
    tuning_iterations: int = 0
    tuning_scales: tuple[float, ...] = (1.0,)
    tuning_lengths: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tuning_scales", tuple(float(s) for s in self.tuning_scales))
        object.__setattr__(self, "tuning_lengths", tuple(float(s) for s in self.tuning_lengths))


@dataclass(frozen=True)
class EnKFSection:
    members: int = 20
    inflation: float = 1.0
    localization: float | None = None


@dataclass(frozen=True)
class RegressorSection:
    perturbation_scale: float = 0.1
    max_samples: int | None = None
    train_mask_ratio: float | None = None
    innovation_form: bool = True


@dataclass(frozen=True)
class DASection:
    method: DAMethod = DAMethod.NONE
    background: BackgroundSection = field(default_factory=BackgroundSection)
    solver: SolverConfig = field(default_factory=SolverConfig)
    enkf: EnKFSection = field(default_factory=EnKFSection)
    hybrid_beta: float = 0.5
    regressor: RegressorSection = field(default_factory=RegressorSection)


@dataclass(frozen=True)
class CycleSection:
    split: str = "test"
    mask_ratio: float = 0.9
    window_hours: int = 12
    n_cycles: int = 0
    spin_up_cycles: int = 10
    initial_perturbation: float = 0.0
    htaa: HTAAConfig = field(default_factory=HTAAConfig)


@dataclass(frozen=True)
class EvalSection:
    variables: tuple[str, ...] = ()
    climatology_split: str = "test"
    acc_threshold: float = 0.6
    launch_interval_hours: int = 336
    max_lead_hours: int = 288
    lead_step_hours: int = 6

    @property
    def leads(self) -> tuple[int, ...]:
        return tuple(range(0, self.max_lead_hours + 1, self.lead_step_hours))


@dataclass(frozen=True)
class OutputSection:
    root: Path = Path("runs")
    shard_hours: int = 720


@dataclass(frozen=True)
class RunConfig:
    """A complete, validated experiment description."""

    name: str
    model: ModelSection
    truth: TruthSection
    seed: int = 0
    osse: OsseSection = field(default_factory=OsseSection)
    da: DASection = field(default_factory=DASection)
    cycle: CycleSection = field(default_factory=CycleSection)
    eval: EvalSection = field(default_factory=EvalSection)
    output: OutputSection = field(default_factory=OutputSection)
    source_path: Path | None = None
    sha256: str = ""

    def with_seed(self, seed: int) -> RunConfig:
        """Override every seed of the run."""
        return replace(
            self,
            seed=seed,
            truth=replace(self.truth, initial_seed=seed),
            osse=replace(self.osse, mask_seed=seed, noise_seed=seed),
        )

    def with_method(self, method: DAMethod) -> RunConfig:
        return replace(self, da=replace(self.da, method=method))

    def with_output_root(self, root: Path) -> RunConfig:
        return replace(self, output=replace(self.output, root=root))


def _section(data: dict[str, Any], key: str) -> dict[str, Any]:
    return dict(data.get(key) or {})


def run_config_from_dict(
    data: dict[str, Any], *, base_dir: Path | None = None, source: str | None = None
) -> RunConfig:
    """Build a RunConfig from a schema-valid mapping.

    Raises:
        ConfigValidationError: Values the schema cannot express are inconsistent.
    """
    base_dir = base_dir or Path.cwd()
    try:
        model_data = _section(data, "model")
        model_type = model_data["type"]
        model = ModelSection(
            type=model_type,
            supported_leads=tuple(model_data.get("supported_leads", (6, 12, 24))),
            params=_section(model_data, model_type),
            twin=_section(model_data, "twin"),
        )
        model.build_forecast()
        truth_data = _section(data, "truth")
        seed = int(data.get("seed", 0))
        truth = TruthSection(
            horizon_hours=int(truth_data["horizon_hours"]),
            spin_up_hours=int(truth_data.get("spin_up_hours", 1440)),
            save_every=int(truth_data.get("save_every", 3)),
            split_fractions=tuple(truth_data.get("split_fractions", (0.7, 0.1, 0.2))),  # type: ignore[arg-type]
            initial_seed=int(truth_data.get("initial_seed", seed)),
        )
        osse_data = _section(data, "osse")
        errors_path = osse_data.get("obs_errors_path")
        osse = OsseSection(
            cadence_hours=int(osse_data.get("cadence_hours", 3)),
            mask_ratios=tuple(float(r) for r in osse_data.get("mask_ratios", (0.9,))),
            regenerate_each_time=bool(osse_data.get("regenerate_each_time", True)),
            mask_seed=int(osse_data.get("mask_seed", seed)),
            noise_seed=int(osse_data.get("noise_seed", seed)),
            obs_errors=dict(osse_data.get("obs_errors", {})),
            obs_errors_path=(base_dir / errors_path) if errors_path else None,
        )
        da_data = _section(data, "da")
        da = DASection(
            method=DAMethod.from_string(da_data.get("method", "none")),
            background=BackgroundSection(**_section(da_data, "background")),
            solver=SolverConfig(**_section(da_data, "solver")),
            enkf=EnKFSection(**_section(da_data, "enkf")),
            hybrid_beta=float(_section(da_data, "hybrid").get("beta", 0.5)),
            regressor=RegressorSection(**_section(da_data, "regressor")),
        )
        cycle_data = _section(data, "cycle")
        htaa_data = _section(cycle_data, "htaa")
        cycle = CycleSection(
            **{k: v for k, v in cycle_data.items() if k != "htaa"},
            htaa=HTAAConfig(
                enabled=bool(htaa_data.get("enabled", False)),
                supported_leads=tuple(htaa_data.get("supported_leads", model.supported_leads)),
                anchor_span=int(htaa_data.get("anchor_span", 24)),
            ),
        )
        eval_data = _section(data, "eval")
        evaluation = EvalSection(
            **{k: v for k, v in eval_data.items() if k != "variables"},
            variables=tuple(eval_data.get("variables", ())),
        )
        output_data = _section(data, "output")
        root = Path(output_data.get("root", Path("runs") / data["name"]))
        output = OutputSection(
            root=root if root.is_absolute() else base_dir / root,
            shard_hours=int(output_data.get("shard_hours", 720)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigValidationError(f"Invalid run configuration: {exc}", path=source) from exc

    if cycle.window_hours % osse.cadence_hours:
        raise ConfigValidationError(
            f"cycle.window_hours={cycle.window_hours} is not a multiple of "
            f"osse.cadence_hours={osse.cadence_hours}",
            path=source,
        )
    if cycle.mask_ratio not in osse.mask_ratios:
        raise ConfigValidationError(
            f"cycle.mask_ratio={cycle.mask_ratio} is not one of osse.mask_ratios", path=source
        )
    if abs(sum(truth.split_fractions) - 1.0) > 1e-9:
        raise ConfigValidationError("truth.split_fractions must sum to 1", path=source)
    unsupported = sorted(set(cycle.htaa.supported_leads) - set(model.supported_leads))
    if unsupported:
        raise ConfigValidationError(
            f"cycle.htaa.supported_leads has leads {unsupported} the model does not support",
            path=source,
            location="htaa.supported_leads",
        )

    return RunConfig(
        name=str(data["name"]),
        seed=seed,
        model=model,
        truth=truth,
        osse=osse,
        da=da,
        cycle=cycle,
        eval=evaluation,
        output=output,
    )
