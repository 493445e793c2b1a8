"""JSON schemas for forms, characters, matrices and CLI reports."""
from __future__ import annotations

import jsonschema

from .errors import SchemaViolation

_RATIONAL = {"type": "string", "minLength": 1}

CHARACTER_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["modulus", "gens", "images"],
    "properties": {
        "modulus": {"type": "integer", "minimum": 1},
        "gens": {"type": "array", "items": {"type": "integer"}},
        "images": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["M", "k"],
                "properties": {"M": {"type": "integer", "minimum": 1}, "k": {"type": "integer"}},
            },
        },
    },
}

FORM_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["type", "weights", "level", "character", "eigenvalues"],
    "properties": {
        "type": {"enum": ["siegel", "elliptic"]},
        "weights": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1, "maxItems": 2},
        "level": {"type": "integer", "minimum": 1},
        "character": CHARACTER_SCHEMA,
        "eigenvalues": {
            "type": "object",
            "propertyNames": {"pattern": "^[0-9]+$"},
            "additionalProperties": {
                "type": "object",
                "additionalProperties": False,
                "required": ["ap"],
                "properties": {"ap": _RATIONAL, "ap2": _RATIONAL},
            },
        },
    },
}

MATRIX_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["domain", "entries"],
    "properties": {
        "domain": {"type": "string", "pattern": "^(Q|cyclotomic|F[0-9]+)$"},
        "entries": {"type": "array", "items": {"type": "string"}, "minItems": 16, "maxItems": 16},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["command", "inputs", "seed", "result", "warnings"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "seed": {"type": ["integer", "null"]},
        "result": {},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
}

ERROR_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["command", "error"],
    "properties": {
        "command": {"type": ["string", "null"]},
        "error": {
            "type": "object",
            "required": ["code", "message"],
            "properties": {"code": {"type": "string"}, "message": {"type": "string"}},
        },
    },
}


def _validate(obj, schema, what):
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(x) for x in exc.absolute_path)
        raise SchemaViolation(f"invalid {what} at '{path}': {exc.message}") from None


def validate_form(obj):
    _validate(obj, FORM_SCHEMA, "form")
    if obj["type"] == "siegel":
        for p, row in obj["eigenvalues"].items():
            if "ap2" not in row:
                raise SchemaViolation(f"siegel form lacks ap2 at p = {p}")


def validate_character(obj):
    _validate(obj, CHARACTER_SCHEMA, "character")


def validate_matrix(obj):
    _validate(obj, MATRIX_SCHEMA, "matrix")


def validate_report(obj):
    _validate(obj, REPORT_SCHEMA, "report")
