"""
Unit tests for run-configuration loading and validation.
"""

from pathlib import Path

import pytest

from src.domain.value_objects import DAMethod
from src.infrastructure.config import (
    ROOT_ENV_VAR,
    ConfigError,
    ConfigValidationError,
    RunConfigLoader,
    run_config_from_dict,
)
from src.infrastructure.dynamics import LatLonAdvectionModel, Lorenz96Model

CONFIG_DIR = Path(__file__).resolve().parents[4] / "configs" / "runs"


class TestShippedConfigs:
    """Every configuration under configs/runs loads and validates."""

    @pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.yaml")), ids=lambda p: p.stem)
    def test_loads(self, path):
        config = RunConfigLoader(environ={}).load(path)
        assert config.name == path.stem
        assert config.source_path == path.resolve()
        assert len(config.sha256) == 64
        assert config.cycle.window_hours % config.osse.cadence_hours == 0

    def test_reference_sections(self):
        config = RunConfigLoader(environ={}).load(CONFIG_DIR / "lorenz96_reference.yaml")
        assert config.da.method is DAMethod.ENKF
        assert config.da.enkf.members == 40
        assert config.model.build().grid.size == 160
        assert config.cycle.htaa.enabled is False
        assert config.osse.error_table().sigma("x", "surface") == 1.0
        assert isinstance(config.model.build(), Lorenz96Model)
        assert config.output.root.resolve() == (CONFIG_DIR.parents[1] / "runs" / "lorenz96_reference").resolve()

    def test_twin_model(self):
        config = RunConfigLoader(environ={}).load(CONFIG_DIR / "lorenz96_twin_htaa.yaml")
        truth_model, forecast_model = config.model.build(), config.model.build_forecast()
        assert truth_model.forcing == 8.0
        assert forecast_model.forcing == 8.2
        assert forecast_model.call_smoothing == 0.1
        assert config.cycle.htaa.supported_leads == (6, 24)

    def test_error_table_file_is_merged(self):
        config = RunConfigLoader(environ={}).load(CONFIG_DIR / "latlon_advection.yaml")
        assert config.osse.obs_errors["z500"] == 242.0
        assert config.osse.error_table().sigma("t2m", "surface") == 3.935
        assert isinstance(config.model.build(), LatLonAdvectionModel)
        assert config.da.regressor.innovation_form is True
        assert config.da.regressor.train_mask_ratio == 0.9

    def test_threedvar_background_tuning(self):
        config = RunConfigLoader(environ={}).load(CONFIG_DIR / "lorenz96_threedvar.yaml")
        background = config.da.background
        assert config.da.method is DAMethod.THREEDVAR
        assert background.correlation_length == 2.0
        assert background.tuning_scales == (0.5, 0.7, 1.0, 1.4)
        assert background.tuning_lengths == (1.0, 2.0, 3.0)
        assert config.cycle.window_hours == config.osse.cadence_hours == 1


class TestRunConfigLoader:
    """Tests for RunConfigLoader."""

    def test_root_from_environment(self, tmp_path, write_config, lorenz_config):
        path = write_config(lorenz_config(tmp_path / "configured"))
        config = RunConfigLoader(environ={ROOT_ENV_VAR: str(tmp_path / "env")}).load(path)
        assert config.output.root == tmp_path / "env"

    def test_relative_root_resolves_against_file(self, tmp_path, write_config, lorenz_config):
        path = write_config(lorenz_config(Path("out")))
        assert RunConfigLoader(environ={}).load(path).output.root == tmp_path / "out"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            RunConfigLoader(environ={}).load(tmp_path / "absent.yaml")

    def test_unknown_key(self, tmp_path, write_config, lorenz_config):
        path = write_config(lorenz_config(tmp_path, cycle={"windows": 12}))
        with pytest.raises(ConfigValidationError, match="cycle") as excinfo:
            RunConfigLoader(environ={}).load(path)
        assert excinfo.value.path == str(path)
        assert excinfo.value.location == "cycle"

    def test_empty_tuning_scales_rejected(self, tmp_path, write_config, lorenz_config):
        path = write_config(lorenz_config(tmp_path, da={"background": {"tuning_scales": []}}))
        with pytest.raises(ConfigValidationError):
            RunConfigLoader(environ={}).load(path)

    def test_unknown_method(self, tmp_path, write_config, lorenz_config):
        path = write_config(lorenz_config(tmp_path, da={"method": "particle"}))
        with pytest.raises(ConfigValidationError):
            RunConfigLoader(environ={}).load(path)

    def test_top_level_must_be_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- a\n- b\n", encoding="utf-8")
        with pytest.raises(ConfigValidationError, match="mapping"):
            RunConfigLoader(environ={}).load(path)

    def test_inline_errors_override_file(self, tmp_path, write_config, lorenz_config):
        (tmp_path / "errors.yaml").write_text("x: 2.0\ny: null\n", encoding="utf-8")
        data = lorenz_config(tmp_path, osse={"obs_errors_path": "errors.yaml", "obs_errors": {"x": 0.5}})
        config = RunConfigLoader(environ={}).load(write_config(data))
        assert config.osse.obs_errors == {"x": 0.5, "y": None}
        assert config.osse.obs_errors_path == tmp_path / "errors.yaml"

    def test_non_numeric_error_entry(self, tmp_path, write_config, lorenz_config):
        (tmp_path / "errors.yaml").write_text("x: large\n", encoding="utf-8")
        path = write_config(lorenz_config(tmp_path, osse={"obs_errors_path": "errors.yaml"}))
        with pytest.raises(ConfigValidationError, match="number"):
            RunConfigLoader(environ={}).load(path)


class TestRunConfigFromDict:
    """Consistency checks the schema cannot express."""

    def test_defaults(self, tmp_path):
        config = run_config_from_dict(
            {"name": "bare", "model": {"type": "lorenz96"}, "truth": {"horizon_hours": 96}},
            base_dir=tmp_path,
        )
        assert config.output.root == tmp_path / "runs" / "bare"
        assert config.truth.split_fractions == (0.7, 0.1, 0.2)
        assert config.cycle.htaa.supported_leads == (6, 12, 24)
        assert config.eval.leads[:3] == (0, 6, 12)
        assert config.eval.leads[-1] == 288

    def test_window_must_be_multiple_of_cadence(self, tmp_path, lorenz_config):
        with pytest.raises(ConfigValidationError, match="multiple"):
            run_config_from_dict(lorenz_config(tmp_path, cycle={"window_hours": 10}))

    def test_cycle_mask_ratio_must_be_generated(self, tmp_path, lorenz_config):
        with pytest.raises(ConfigValidationError, match="mask_ratio"):
            run_config_from_dict(lorenz_config(tmp_path, cycle={"mask_ratio": 0.9}))

    def test_split_fractions_sum_to_one(self, tmp_path, lorenz_config):
        data = lorenz_config(tmp_path, truth={"split_fractions": [0.5, 0.2, 0.2]})
        with pytest.raises(ConfigValidationError, match="sum"):
            run_config_from_dict(data)

    def test_invalid_section_value(self, tmp_path, lorenz_config):
        with pytest.raises(ConfigValidationError):
            run_config_from_dict(lorenz_config(tmp_path, da={"enkf": {"members": 1.5, "bogus": 1}}))

    def test_with_seed_overrides_every_seed(self, tmp_path, lorenz_config):
        config = run_config_from_dict(lorenz_config(tmp_path)).with_seed(11)
        assert config.seed == 11
        assert config.truth.initial_seed == 11
        assert (config.osse.mask_seed, config.osse.noise_seed) == (11, 11)

    def test_section_seeds_default_to_run_seed(self, tmp_path, lorenz_config):
        config = run_config_from_dict(lorenz_config(tmp_path))
        assert config.truth.initial_seed == 7
        assert config.osse.mask_seed == 7

    def test_with_method(self, tmp_path, lorenz_config):
        config = run_config_from_dict(lorenz_config(tmp_path)).with_method(DAMethod.ENKF)
        assert config.da.method is DAMethod.ENKF
        assert config.da.enkf.localization == 4.0

    def test_htaa_leads_must_be_model_leads(self, tmp_path, lorenz_config):
        data = lorenz_config(tmp_path, cycle={"htaa": {"enabled": True, "supported_leads": [6, 48]}})
        with pytest.raises(ConfigValidationError, match="48") as excinfo:
            run_config_from_dict(data, source="run.yaml")
        assert excinfo.value.location == "htaa.supported_leads"
        assert excinfo.value.path == "run.yaml"

    def test_htaa_leads_subset_accepted(self, tmp_path, lorenz_config):
        data = lorenz_config(tmp_path, cycle={"htaa": {"enabled": True, "supported_leads": [3, 24]}})
        assert run_config_from_dict(data).cycle.htaa.supported_leads == (3, 24)

    def test_background_tuning_defaults_off(self, tmp_path, lorenz_config):
        background = run_config_from_dict(lorenz_config(tmp_path)).da.background
        assert background.correlation_length is None
        assert background.tuning_cycles == 0
        assert background.tuning_scales == (1.0,)

    def test_tuning_lists_become_tuples(self, tmp_path, lorenz_config):
        data = lorenz_config(
            tmp_path, da={"background": {"tuning_cycles": 20, "tuning_scales": [1, 2], "tuning_lengths": [3]}}
        )
        background = run_config_from_dict(data).da.background
        assert background.tuning_scales == (1.0, 2.0)
        assert background.tuning_lengths == (3.0,)

    def test_regressor_innovation_form_flag(self, tmp_path, lorenz_config):
        data = lorenz_config(tmp_path, da={"regressor": {"innovation_form": False}})
        assert run_config_from_dict(data).da.regressor.innovation_form is False
        assert run_config_from_dict(lorenz_config(tmp_path)).da.regressor.innovation_form is True
