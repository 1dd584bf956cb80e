"""JSON schemas for emitted files and the CSV column contracts."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import jsonschema

from pacstl.errors import InputError

_NUM = {"type": "number"}
_INTERVAL = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}

SET_SCHEMA = {
    "type": "object",
    "required": ["type"],
    "properties": {"type": {"enum": ["ellipsoid", "zonotope"]}},
}

TUBE_SCHEMA = {
    "type": "object",
    "required": ["dt", "beta", "eps_tube", "eps_t", "steps", "sets"],
    "properties": {
        "dt": {"type": "number", "exclusiveMinimum": 0},
        "beta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "eps_tube": {"type": "number", "minimum": 0, "maximum": 1},
        "eps_t": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}},
        "steps": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "sets": {"type": "array", "items": SET_SCHEMA, "minItems": 1},
        "velocity_bucket": {"oneOf": [{"type": "null"}, _INTERVAL]},
    },
}

RUN_SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["config", "t_e", "t_e_spec", "interval_at_te", "eps_at_te", "collision"],
    "properties": {
        "t_e": {"type": ["number", "null"]},
        "t_e_spec": {"type": "object", "additionalProperties": _NUM},
        "interval_at_te": {"type": "object", "additionalProperties": _INTERVAL},
        "eps_at_te": {"type": "object", "additionalProperties": _NUM},
        "collision": {"type": "boolean"},
    },
}

DUFFING_REPORT_SCHEMA = {
    "type": "object",
    "required": ["ellipsoid", "zonotope_four", "zonotope_identity"],
    "additionalProperties": {
        "type": "object",
        "required": ["eps", "volume"],
        "properties": {"eps": _NUM, "volume": _NUM},
    },
}

SCENARIO_SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["n_runs", "n_triggered", "n_collisions", "mean_t_e"],
    "properties": {
        "n_runs": {"type": "integer", "minimum": 0},
        "n_triggered": {"type": "integer", "minimum": 0},
        "n_collisions": {"type": "integer", "minimum": 0},
        "mean_t_e": {"type": ["number", "null"]},
    },
}

EVAL_SCHEMA = {
    "type": "object",
    "required": ["spec", "interval", "t_low", "t_up", "eps", "beta", "mode"],
    "properties": {
        "interval": _INTERVAL, "t_low": {"type": "integer"}, "t_up": {"type": "integer"},
        "eps": {"type": "number", "minimum": 0, "maximum": 1}, "mode": {"enum": ["tube", "timepoint"]},
    },
}

_BUCKET_REPORT = {"type": "object", "patternProperties": {"^U[0-9]+$": {"type": "object"}},
                  "additionalProperties": False, "minProperties": 1}

JSON_SCHEMAS = {
    "tube": TUBE_SCHEMA, "run_summary": RUN_SUMMARY_SCHEMA, "duffing_report": DUFFING_REPORT_SCHEMA,
    "scenario_summary": SCENARIO_SUMMARY_SCHEMA, "eval": EVAL_SCHEMA, "bucket_report": _BUCKET_REPORT,
}


def _csv_columns():
    from pacstl.maritime.scenario import LOG_COLUMNS

    return {"monitor_log": list(LOG_COLUMNS), "boundary": ["set", "x", "y"], "eps_table": ["bucket", "step", "eps"]}


def detect_json_kind(data) -> str:
    if isinstance(data, dict) and "sets" in data and "eps_tube" in data:
        return "tube"
    if isinstance(data, dict) and "t_e" in data:
        return "run_summary"
    if isinstance(data, dict) and "ellipsoid" in data:
        return "duffing_report"
    if isinstance(data, dict) and "n_runs" in data:
        return "scenario_summary"
    if isinstance(data, dict) and "interval" in data and "spec" in data:
        return "eval"
    if isinstance(data, dict) and data and all(str(k).startswith("U") for k in data):
        return "bucket_report"
    raise InputError("unrecognized JSON document")


def validate_file(path) -> str:
    """Validate one emitted file; returns the detected kind or raises ``InputError``."""
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {p}")
    if p.suffix == ".json":
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{p}: invalid JSON ({exc})") from None
        kind = detect_json_kind(data)
        try:
            jsonschema.validate(data, JSON_SCHEMAS[kind])
        except jsonschema.ValidationError as exc:
            raise InputError(f"{p}: {kind} schema violation: {exc.message}") from None
        return kind
    if p.suffix == ".csv":
        with p.open(newline="") as fh:
            header = next(csv.reader(fh), None)
        for kind, cols in _csv_columns().items():
            if header == cols:
                return kind
        raise InputError(f"{p}: unknown CSV header {header}")
    raise InputError(f"{p}: unsupported file type")
