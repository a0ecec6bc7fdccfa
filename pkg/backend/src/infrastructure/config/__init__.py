"""Run-configuration loading."""

from .exceptions import ConfigError, ConfigValidationError
from .run_config import (
    CycleSection,
    DASection,
    EvalSection,
    ModelSection,
    OsseSection,
    OutputSection,
    RunConfig,
    TruthSection,
    run_config_from_dict,
)
from .yaml_loader import ROOT_ENV_VAR, RunConfigLoader

__all__ = [
    "ConfigError",
    "ConfigValidationError",
    "CycleSection",
    "DASection",
    "EvalSection",
    "ModelSection",
    "OsseSection",
    "OutputSection",
    "ROOT_ENV_VAR",
    "RunConfig",
    "RunConfigLoader",
    "TruthSection",
    "run_config_from_dict",
]
