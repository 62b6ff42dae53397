"""JSON schemas for everything the command line prints or writes."""
from __future__ import annotations

import jsonschema

_INT = {"type": "integer"}
_STR = {"type": "string"}
_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}
_PARTITION = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}
_COMPLEX = {"type": ["array", "null"], "items": _NUM, "minItems": 2, "maxItems": 2}

_ELEMENT = {"type": "array", "items": _STR}  # rational coordinates in the power basis
_FACTOR = {
    "type": "object",
    "required": ["alpha", "beta", "mult"],
    "properties": {"alpha": _ELEMENT, "beta": _ELEMENT, "mult": {"type": "integer", "minimum": 1}},
}

RELATION = {
    "type": "object",
    "required": ["field", "mu", "terms"],
    "properties": {
        "field": {"type": "object", "required": ["min_poly"], "properties": {"min_poly": {"type": "array", "items": _STR}}},
        "mu": _PARTITION,
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff", "form"],
                "properties": {
                    "coeff": _ELEMENT,
                    "form": {
                        "type": "object",
                        "required": ["scalar", "factors"],
                        "properties": {
                            "scalar": _ELEMENT,
                            "factors": {"type": "array", "items": _FACTOR},
                        },
                    },
                },
            },
        },
        "provenance": _STR,
    },
}

LIBRARY = {
    "type": "object",
    "required": ["certificates"],
    "properties": {"certificates": {"type": "array", "items": RELATION}},
}

REPORT = {
    "type": "object",
    "required": ["command", "inputs", "certificates", "timing"],
    "properties": {
        "command": _STR,
        "inputs": {"type": "object"},
        "certificates": {"type": "array", "items": _STR},
        "timing": _NUM,
    },
}


def _with_report(schema: dict) -> dict:
    out = dict(schema)
    out["required"] = list(schema.get("required", [])) + ["report"]
    out["properties"] = dict(schema.get("properties", {}), report=REPORT)
    return out


BRACKET = {
    "type": "object",
    "required": ["mu", "lower", "upper", "lower_cert", "upper_cert", "paper_stated_lower"],
    "properties": {
        "mu": _PARTITION,
        "lower": _INT,
        "upper": _INT,
        "lower_cert": _STR,
        "upper_cert": _STR,
        "paper_stated_lower": _INT,
    },
}

OUTPUT = {
    "bounds": _with_report(BRACKET),
    "classify": _with_report({
        "type": "object",
        "required": ["mu", "verdict", "rule"],
        "properties": {
            "mu": _PARTITION,
            "verdict": {"enum": ["Growing", "Stabilising", "Unknown"]},
            "rule": _STR,
            "certificate": RELATION,
            "details": {"type": "object"},
        },
    }),
    "verify": _with_report({
        "type": "object",
        "required": ["ok", "relations"],
        "properties": {
            "ok": {"type": "boolean"},
            "relations": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["mu", "length", "ok", "diagnostic"],
                    "properties": {"mu": _PARTITION, "length": _INT, "ok": {"type": "boolean"}, "diagnostic": _STR},
                },
            },
        },
    }),
    "examples": _with_report({
        "type": "object",
        "required": ["examples"],
        "properties": {
            "examples": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["name", "description"],
                    "properties": {
                        "name": _STR,
                        "description": _STR,
                        "ok": {"type": "boolean"},
                        "diagnostic": _STR,
                        "seconds": _NUM,
                    },
                },
            },
        },
    }),
    "orbit-rank": _with_report({
        "type": "object",
        "required": ["mu", "roots", "orbit_size", "rank", "ambient"],
        "properties": {
            "mu": _PARTITION,
            "roots": {"type": "array", "items": _STR},
            "orbit_size": _INT,
            "rank": _INT,
            "ambient": _INT,
            "relation": RELATION,
        },
    }),
    "parking": _with_report({
        "type": "object",
        "required": ["mu", "a", "bound"],
        "properties": {
            "mu": _PARTITION,
            "a": {"type": ["array", "null"], "items": _INT},
            "bound": {"type": ["integer", "null"]},
        },
    }),
    "numsearch": _with_report({
        "type": "object",
        "required": ["mu", "length", "found", "search"],
        "properties": {
            "mu": _PARTITION,
            "length": _INT,
            "found": {"type": "boolean"},
            "candidate": {
                "type": ["object", "null"],
                "required": ["roots", "coeffs", "residual", "max_residual", "seed"],
                "properties": {
                    "roots": {"type": "array", "items": {"type": "array", "items": _COMPLEX}},
                    "coeffs": {"type": "array", "items": _COMPLEX},
                    "residual": _NUM,
                    "max_residual": _NUM,
                    "gauge_residual": _NUM,
                    "seed": _INT,
                },
            },
            "search": {"type": "object", "properties": {"best_residual": _NUM_OR_NULL}},
            "relation": {"anyOf": [RELATION, {"type": "null"}]},
            "relation_file": _STR,
        },
    }),
    "table": _with_report({
        "type": "object",
        "required": ["rows"],
        "properties": {"rows": {"type": "array", "items": BRACKET}},
    }),
}

ERROR = {
    "type": "object",
    "required": ["error", "message"],
    "properties": {"error": _STR, "message": _STR},
}


def validate(command: str, obj) -> None:
    """Raise :class:`jsonschema.ValidationError` if ``obj`` does not match."""
    jsonschema.validate(obj, OUTPUT[command])


def validate_relation(obj) -> None:
    jsonschema.validate(obj, RELATION)
