"""
Unit tests for the dab command-line entry point.
"""

import pytest

from src.domain.value_objects import DAMethod
from src.interface.cli.dab_cli import build_parser, main


class TestParser:
    """Tests for argument parsing."""

    def test_method_override(self):
        args = build_parser().parse_args(["cycle", "--config", "run.yaml", "--method", "EnKF"])
        assert args.command == "cycle"
        assert args.method is DAMethod.ENKF
        assert args.seed is None

    def test_forecast_source(self):
        args = build_parser().parse_args(["forecast", "--config", "run.yaml", "--from", "4dvar", "--seed", "3"])
        assert args.from_method is DAMethod.FOURDVAR
        assert args.seed == 3

    def test_unknown_method_is_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["cycle", "--config", "run.yaml", "--method", "particle"])
        assert excinfo.value.code == 2

    def test_missing_subcommand(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2

    def test_config_is_required(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["truth"])
        assert excinfo.value.code == 2


class TestMain:
    """Tests for exit codes and side outputs."""

    def test_missing_config_exits_one(self, tmp_path, capsys):
        assert main(["truth", "--config", str(tmp_path / "absent.yaml")]) == 1
        assert "Config file not found" in capsys.readouterr().err

    def test_invalid_config_exits_one(self, tmp_path, write_config, lorenz_config, capsys):
        path = write_config(lorenz_config(tmp_path, cycle={"window_hours": 10}))
        assert main(["truth", "--config", str(path)]) == 1
        assert "multiple" in capsys.readouterr().err

    def test_report_before_any_run(self, tmp_path, write_config, lorenz_config, capsys):
        path = write_config(lorenz_config(tmp_path / "out"))
        assert main(["report", "--config", str(path)]) == 1
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "grid" in captured.err

    def test_metrics_textfile_written_on_failure(self, tmp_path, write_config, lorenz_config):
        path = write_config(lorenz_config(tmp_path / "out"))
        textfile = tmp_path / "prom" / "dab.prom"
        code = main(["--metrics-textfile", str(textfile), "eval", "--config", str(path)])
        assert code == 1
        assert "dab_cycles_total" in textfile.read_text()
