"""
JSON Schema for run configuration documents.

Every object rejects unknown keys.
"""

from __future__ import annotations

_POSITIVE_INT = {"type": "integer", "minimum": 1}
_NON_NEGATIVE_INT = {"type": "integer", "minimum": 0}
_LEADS = {"type": "array", "items": _POSITIVE_INT, "minItems": 1, "uniqueItems": True}
_SIGMA = {"type": ["number", "null"], "minimum": 0}


def _object(properties: dict, required: list[str] | None = None) -> dict:
    return {
        "type": "object",
        "properties": properties,
        "required": required or [],
        "additionalProperties": False,
    }


_VARIABLE = _object(
    {
        "name": {"type": "string", "minLength": 1},
        "units": {"type": "string"},
        "kind": {"enum": ["upper_air", "surface"]},
        "obs_sigma": _SIGMA,
        "mean": {"type": "number"},
        "amplitude": {"type": "number", "exclusiveMinimum": 0},
    },
    ["name"],
)

_MODEL = _object(
    {
        "type": {"enum": ["lorenz96", "latlon_advection"]},
        "supported_leads": _LEADS,
        "lorenz96": _object(
            {
                "m": {"type": "integer", "minimum": 4},
                "forcing": {"type": "number"},
                "dt_internal": {"type": "number", "exclusiveMinimum": 0},
                "call_smoothing": {"type": "number", "minimum": 0, "maximum": 0.25},
            }
        ),
        "latlon_advection": _object(
            {
                "n_lat": _POSITIVE_INT,
                "n_lon": _POSITIVE_INT,
                "levels": {
                    "type": "array",
                    "items": {"type": ["integer", "string"]},
                    "minItems": 1,
                },
                "variables": {"type": "array", "items": _VARIABLE, "minItems": 1},
                "omega": {"type": "number"},
                "kappa": {"type": "number", "minimum": 0},
            },
            ["variables"],
        ),
        "twin": _object(
            {
                "forcing": {"type": "number"},
                "call_smoothing": {"type": "number", "minimum": 0, "maximum": 0.25},
                "omega": {"type": "number"},
                "kappa": {"type": "number", "minimum": 0},
            }
        ),
    },
    ["type"],
)

_TRUTH = _object(
    {
        "spin_up_hours": _NON_NEGATIVE_INT,
        "horizon_hours": _POSITIVE_INT,
        "save_every": _POSITIVE_INT,
        "split_fractions": {
            "type": "array",
            "items": {"type": "number", "minimum": 0, "maximum": 1},
            "minItems": 3,
            "maxItems": 3,
        },
        "initial_seed": _NON_NEGATIVE_INT,
    },
    ["horizon_hours"],
)

_OSSE = _object(
    {
        "cadence_hours": _POSITIVE_INT,
        "mask_ratios": {
            "type": "array",
            "items": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
            "minItems": 1,
            "uniqueItems": True,
        },
        "regenerate_each_time": {"type": "boolean"},
        "mask_seed": _NON_NEGATIVE_INT,
        "noise_seed": _NON_NEGATIVE_INT,
        "obs_errors": {"type": "object", "additionalProperties": _SIGMA},
        "obs_errors_path": {"type": "string", "minLength": 1},
    }
)

_DA = _object(
    {
        "method": {"enum": ["none", "3dvar", "4dvar", "enkf", "hybrid", "regressor"]},
        "background": _object(
            {
                "lead": _POSITIVE_INT,
                "perturbation_scale": {"type": "number", "minimum": 0},
                "variance_scale": {"type": "number", "exclusiveMinimum": 0},
                "max_samples": _POSITIVE_INT,
                "correlation_length": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "tuning_cycles": _NON_NEGATIVE_INT,
                "tuning_iterations": _NON_NEGATIVE_INT,
                "tuning_scales": {
                    "type": "array",
                    "items": {"type": "number", "exclusiveMinimum": 0},
                    "minItems": 1,
                },
                "tuning_lengths": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
            }
        ),
        "solver": _object(
            {
                "max_iterations": _POSITIVE_INT,
                "tolerance": {"type": "number", "exclusiveMinimum": 0},
                "memory": _POSITIVE_INT,
            }
        ),
        "enkf": _object(
            {
                "members": {"type": "integer", "minimum": 2},
                "inflation": {"type": "number", "minimum": 1},
                "localization": {"type": ["number", "null"], "exclusiveMinimum": 0},
            }
        ),
        "hybrid": _object({"beta": {"type": "number", "minimum": 0, "maximum": 1}}),
        "regressor": _object(
            {
                "perturbation_scale": {"type": "number", "minimum": 0},
                "max_samples": _POSITIVE_INT,
                "train_mask_ratio": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                "innovation_form": {"type": "boolean"},
            }
        ),
    }
)

_CYCLE = _object(
    {
        "split": {"enum": ["train", "val", "test"]},
        "mask_ratio": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "window_hours": _POSITIVE_INT,
        "n_cycles": _NON_NEGATIVE_INT,
        "spin_up_cycles": _NON_NEGATIVE_INT,
        "initial_perturbation": {"type": "number", "minimum": 0},
        "htaa": _object(
            {
                "enabled": {"type": "boolean"},
                "supported_leads": _LEADS,
                "anchor_span": _POSITIVE_INT,
            }
        ),
    }
)

_EVAL = _object(
    {
        "variables": {"type": "array", "items": {"type": "string"}},
        "climatology_split": {"enum": ["train", "val", "test"]},
        "acc_threshold": {"type": "number"},
        "launch_interval_hours": _POSITIVE_INT,
        "max_lead_hours": _NON_NEGATIVE_INT,
        "lead_step_hours": _POSITIVE_INT,
    }
)

_OUTPUT = _object(
    {
        "root": {"type": "string", "minLength": 1},
        "shard_hours": _POSITIVE_INT,
    }
)

RUN_CONFIG_SCHEMA: dict = _object(
    {
        "name": {"type": "string", "minLength": 1},
        "seed": _NON_NEGATIVE_INT,
        "model": _MODEL,
        "truth": _TRUTH,
        "osse": _OSSE,
        "da": _DA,
        "cycle": _CYCLE,
        "eval": _EVAL,
        "output": _OUTPUT,
    },
    ["name", "model", "truth"],
)
