"""
YAML run-configuration loader.

Reads one experiment file, validates it against RUN_CONFIG_SCHEMA and builds
a RunConfig. DAB_ROOT, when set, replaces the configured output root.
"""

from __future__ import annotations

import hashlib
import os
from collections.abc import Mapping
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import jsonschema
import yaml

from .exceptions import ConfigError, ConfigValidationError
from .run_config import RunConfig, run_config_from_dict
from .schemas import RUN_CONFIG_SCHEMA

ROOT_ENV_VAR = "DAB_ROOT"


def _read_yaml(path: Path) -> dict[str, Any]:
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Failed to read config file: {path}") from exc

    try:
        data = yaml.safe_load(content)
    except yaml.YAMLError as exc:
        raise ConfigError(f"Invalid YAML in config file: {path}") from exc

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigValidationError(
            "YAML document must be a mapping/object at the top level.",
            path=str(path),
        )
    return data


def _validate_schema(
    data: Mapping[str, Any], schema: Mapping[str, Any], *, path: Path
) -> None:
    try:
        jsonschema.validate(instance=dict(data), schema=dict(schema))
    except jsonschema.ValidationError as exc:
        location = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigValidationError(
            f"Schema validation failed at {location}: {exc.message}",
            path=str(path),
            location=location,
        ) from exc
    except jsonschema.SchemaError as exc:
        raise ConfigError(f"Internal schema error: {exc.message}") from exc


def _read_error_table(path: Path) -> dict[str, float | None]:
    data = _read_yaml(path)
    for label, sigma in data.items():
        if sigma is not None and not isinstance(sigma, (int, float)):
            raise ConfigValidationError(
                f"Observation error for {label} must be a number or null", path=str(path)
            )
    return {str(k): (None if v is None else float(v)) for k, v in data.items()}


@dataclass(frozen=True)
class RunConfigLoader:
    """Loads run configurations; relative paths resolve against the file's directory."""

    environ: Mapping[str, str] | None = None

    def _env(self) -> Mapping[str, str]:
        return os.environ if self.environ is None else self.environ

    def load(self, path: str | Path) -> RunConfig:
        path = Path(path)
        raw = path.read_bytes() if path.is_file() else None
        if raw is None:
            raise ConfigError(f"Config file not found: {path}")
        data = _read_yaml(path)
        _validate_schema(data, RUN_CONFIG_SCHEMA, path=path)

        osse = dict(data.get("osse") or {})
        if osse.get("obs_errors_path"):
            file_table = _read_error_table(path.parent / osse["obs_errors_path"])
            osse["obs_errors"] = {**file_table, **(osse.get("obs_errors") or {})}
            data = {**data, "osse": osse}

        config = run_config_from_dict(data, base_dir=path.parent, source=str(path))
        env_root = self._env().get(ROOT_ENV_VAR)
        if env_root:
            config = config.with_output_root(Path(env_root))
        return replace(
            config,
            source_path=path.resolve(),
            sha256=hashlib.sha256(raw).hexdigest(),
        )
