"""JSON report schemas (version 1) and validation."""

from __future__ import annotations

import jsonschema

SCHEMA_VERSION = 1

_RANK = {
    "type": "object",
    "minProperties": 1,
    "maxProperties": 1,
    "properties": {
        "zero": {"const": True},
        "finite": {"type": "integer", "minimum": 0},
        "countably_infinite": {"const": True},
        "cardinal_of_field": {"const": True},
        "unknown": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/rank"}]},
    },
    "additionalProperties": False,
}

_RANK_RECORD = {
    "type": "object",
    "required": ["field", "ring", "n", "i", "rank", "trace"],
    "properties": {
        "field": {"type": "string"},
        "ring": {"enum": ["field", "integers"]},
        "n": {"type": "integer"},
        "i": {"type": "integer"},
        "rank": {"$ref": "#/$defs/rank"},
        "trace": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

_CLASS = {
    "type": "object",
    "required": ["field", "degree", "value"],
    "properties": {
        "field": {"type": "string"},
        "degree": {"type": "integer"},
        "value": {"type": "string"},
        "expanded": {"type": "string"},
        "is_zero": {"type": ["boolean", "null"]},
    },
}

_RESULTS = {
    "rank": {"$ref": "#/$defs/rank_record"},
    "rank-table": {
        "type": "object",
        "required": ["field", "n_range", "i_range", "tables"],
        "properties": {
            "field": {"type": "string"},
            "n_range": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
            "i_range": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
            "tables": {
                "type": "object",
                "additionalProperties": {"type": "array", "items": {"$ref": "#/$defs/rank_record"}},
            },
        },
    },
    "borel": {
        "type": "object",
        "required": ["r1", "r2", "degrees", "generators", "k_ranks"],
        "properties": {
            "r1": {"type": "integer", "minimum": 0},
            "r2": {"type": "integer", "minimum": 0},
            "degrees": {"type": "array", "items": {"type": "integer"}},
            "generators": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["degree", "weight", "multiplicity"],
                    "properties": {"degree": {"type": "integer"}, "weight": {"type": "integer"},
                                   "multiplicity": {"type": "integer"}},
                },
            },
            "k_ranks": {
                "type": "array",
                "items": {"type": "object", "required": ["degree", "rank"],
                          "properties": {"degree": {"type": "integer"},
                                         "rank": {"type": "integer", "minimum": 0}}},
            },
        },
    },
    "chow": {
        "type": "object",
        "required": ["model", "twist", "codim", "bound", "invariant_factors", "free_rank",
                     "stabilized", "truncated"],
        "properties": {
            "model": {"type": "string"},
            "twist": {"type": "integer"},
            "codim": {"type": "integer"},
            "bound": {"type": "integer"},
            "invariant_factors": {"type": "array", "items": {"type": "integer"}},
            "free_rank": {"type": "integer", "minimum": 0},
            "stabilized": {"type": "boolean"},
            "truncated": {"type": "boolean"},
        },
    },
    "ksym normalize": {
        "type": "object",
        "required": ["input", "normal_form"],
        "properties": {"input": {"type": "string"}, "normal_form": {"$ref": "#/$defs/class"}},
    },
    "ksym residue": {
        "type": "object",
        "required": ["input", "place", "tame_sign", "residue"],
        "properties": {"input": {"type": "string"}, "place": {"type": "string"},
                       "tame_sign": {"enum": ["classic", "rost"]},
                       "residue": {"$ref": "#/$defs/class"}},
    },
    "ksym norm": {
        "type": "object",
        "required": ["input", "extension", "norm"],
        "properties": {"input": {"type": "string"}, "extension": {"type": "string"},
                       "norm": {"$ref": "#/$defs/class"}},
    },
    "morph normalize": {
        "type": "object",
        "required": ["input", "source", "target", "word", "summands", "steps", "trace"],
        "properties": {
            "input": {"type": "string"},
            "source": {"$ref": "#/$defs/object"},
            "target": {"$ref": "#/$defs/object"},
            "word": {"type": "string"},
            "steps": {"type": "integer", "minimum": 0},
            "summands": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["coefficient", "r", "norm", "sigma", "restriction", "valuations", "tau"],
                    "properties": {
                        "coefficient": {"type": "integer"},
                        "r": {"type": "integer", "minimum": 0},
                        "norm": {"type": ["string", "null"]},
                        "sigma": {"type": ["string", "null"]},
                        "restriction": {"type": ["string", "null"]},
                        "valuations": {"type": "array", "items": {"type": "string"}},
                        "tau": {"type": ["string", "null"]},
                    },
                },
            },
            "trace": {"type": "array", "items": {"type": "object"}},
        },
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "rostforge report",
    "type": "object",
    "required": ["schema", "command"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"enum": sorted(_RESULTS)},
        "result": {},
        "error": {
            "type": "object",
            "required": ["type", "message"],
            "properties": {
                "type": {"type": "string"},
                "message": {"type": "string"},
                "position": {"type": "integer"},
                "input": {"type": "string"},
            },
        },
        "figures": {"type": "array", "items": {"type": "string"}},
    },
    "oneOf": [{"required": ["result"]}, {"required": ["error"]}],
    "allOf": [
        {"if": {"properties": {"command": {"const": name}}, "required": ["result"]},
         "then": {"properties": {"result": sub}}}
        for name, sub in _RESULTS.items()
    ],
    "$defs": {
        "rank": _RANK,
        "rank_record": _RANK_RECORD,
        "class": _CLASS,
        "object": {"type": "object", "required": ["field", "twist"],
                   "properties": {"field": {"type": "string"}, "twist": {"type": "integer"}}},
    },
}


def validate_report(report):
    """Raise jsonschema.ValidationError unless report matches the published schema."""
    jsonschema.validate(report, REPORT_SCHEMA, cls=jsonschema.Draft202012Validator)


def envelope(command, result=None, error=None, figures=None):
    out = {"schema": SCHEMA_VERSION, "command": command}
    if error is not None:
        out["error"] = error
    else:
        out["result"] = result
    if figures:
        out["figures"] = list(figures)
    return out
