from __future__ import annotations

from typing import Any

from jsonschema import Draft202012Validator

from .model import Diagnostics

_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$"},
    ]
}
_ROW = {"type": "array", "items": _RATIONAL}

DATUM_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["dim", "gram", "lattice_basis", "roots"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "gram": {"type": "array", "minItems": 1, "items": _ROW},
        "lattice_basis": {"type": "array", "items": _ROW},
        "roots": {"type": "array", "items": _ROW},
        "name": {"type": "string"},
    },
    "additionalProperties": False,
}

_VALIDATOR = Draft202012Validator(DATUM_SCHEMA)


def validate_document(document: Any) -> dict[str, Any]:
    """Schema check of a raw datum document, before any rational is parsed."""
    errors = [
        {"path": _format_error_path(error.absolute_path), "message": error.message}
        for error in _VALIDATOR.iter_errors(document)
    ]
    errors.sort(key=lambda item: (item["path"], item["message"]))
    return {"ok": not errors, "errors": errors}


def render_diagnostics(diagnostics: Diagnostics) -> dict[str, Any]:
    errors = [
        {
            "path": issue.path,
            "message": issue.message,
            "witness": list(issue.witness) if issue.witness is not None else None,
        }
        for issue in diagnostics.issues
    ]
    return {"ok": diagnostics.ok, "errors": errors}


def _format_error_path(path: Any) -> str:
    if not path:
        return ""
    return "/" + "/".join(str(item) for item in path)
