from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from typing import Any

import yaml

from .errors import DatumFileError, ToolkitError
from .exact_linalg import QMatrix, QVector, format_rational, parse_rational, require_gram
from .model import EuclideanRootDatum, Lattice, RootSystem
from .validate import validate_document

logger = logging.getLogger(__name__)

DATUM_SUFFIXES = (".json", ".yaml", ".yml")


@dataclass(frozen=True)
class DatumFile:
    path: str
    relative_path: str
    datum_id: str
    datum: EuclideanRootDatum | None
    error: DatumFileError | None = None


def discover_datum_files(datum_dir: str) -> list[str]:
    paths: list[str] = []
    for root, _, files in os.walk(datum_dir):
        for name in files:
            if name.lower().endswith(DATUM_SUFFIXES):
                paths.append(os.path.join(root, name))
    paths.sort()
    return paths


def load_raw_datum(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            if path.lower().endswith(".json"):
                return json.load(handle)
            return yaml.safe_load(handle)
    except OSError as exc:
        raise DatumFileError(path, f"cannot read file: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise DatumFileError(path, f"not UTF-8 text: {exc.reason}", f"byte {exc.start}") from exc
    except json.JSONDecodeError as exc:
        raise DatumFileError(path, f"invalid JSON: {exc.msg}", f"{exc.lineno}:{exc.colno}") from exc
    except yaml.YAMLError as exc:
        raise DatumFileError(path, f"invalid YAML: {exc}") from exc


def parse_datum_document(raw: Any, path: str = "<document>") -> EuclideanRootDatum:
    """Schema check, exact parse, then the semantic checks done by the model constructors."""
    result = validate_document(raw)
    if not result["ok"]:
        first = result["errors"][0]
        raise DatumFileError(path, first["message"], first["path"])

    dim = raw["dim"]
    gram_rows = _matrix(raw["gram"], path, "/gram", width=dim)
    if len(gram_rows) != dim:
        raise DatumFileError(path, f"gram has {len(gram_rows)} rows, expected {dim}", "/gram")
    basis = _matrix(raw["lattice_basis"], path, "/lattice_basis", width=dim)
    roots = _matrix(raw["roots"], path, "/roots", width=dim)

    gram = _build(path, "/gram", lambda: _gram(gram_rows))
    lattice = _build(path, "/lattice_basis", lambda: Lattice.from_vectors(basis, gram))
    root_system = _build(path, "/roots", lambda: RootSystem(dim, gram, tuple(roots)))
    return EuclideanRootDatum(gram, lattice, root_system)


def parse_datum_file(path: str) -> EuclideanRootDatum:
    return parse_datum_document(load_raw_datum(path), path)


def build_datum_files(datum_dir: str) -> list[DatumFile]:
    datum_dir = os.path.abspath(datum_dir)
    files: list[DatumFile] = []
    used: set[str] = set()
    for path in discover_datum_files(datum_dir):
        raw: Any = None
        datum: EuclideanRootDatum | None = None
        error: DatumFileError | None = None
        try:
            raw = load_raw_datum(path)
            datum = parse_datum_document(raw, path)
        except DatumFileError as exc:
            logger.warning("skipping datum file: %s", exc)
            error = exc
        datum_id = _ensure_unique(_datum_id(path, raw), used)
        used.add(datum_id)
        files.append(
            DatumFile(
                path=path,
                relative_path=os.path.relpath(path, datum_dir),
                datum_id=datum_id,
                datum=datum,
                error=error,
            )
        )
    return files


def datum_to_document(datum: EuclideanRootDatum) -> dict[str, Any]:
    """Canonical document: rationals as strings, roots sorted lexicographically."""
    return {
        "dim": datum.dim,
        "gram": [_strings(row) for row in datum.gram.entries],
        "lattice_basis": [_strings(v) for v in datum.lattice.vectors()],
        "roots": [_strings(alpha) for alpha in sorted(datum.roots.roots)],
    }


def dump_document(document: dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def _matrix(rows: list[list[Any]], path: str, location: str, width: int) -> list[QVector]:
    parsed: list[QVector] = []
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DatumFileError(path, f"row has {len(row)} entries, expected {width}", f"{location}/{i}")
        values = []
        for j, item in enumerate(row):
            try:
                values.append(parse_rational(item))
            except ToolkitError as exc:
                raise DatumFileError(path, str(exc), f"{location}/{i}/{j}") from exc
        parsed.append(tuple(values))
    return parsed


def _build(path: str, location: str, factory: Any) -> Any:
    try:
        return factory()
    except ToolkitError as exc:
        raise DatumFileError(path, str(exc), location) from exc


def _strings(values: QVector) -> list[str]:
    return [format_rational(x) for x in values]


def _datum_id(path: str, raw: Any) -> str:
    if isinstance(raw, dict):
        name = raw.get("name")
        if isinstance(name, str) and name.strip():
            return name.strip()
    base = os.path.basename(path)
    name, _ = os.path.splitext(base)
    return name


def _ensure_unique(base_id: str, used: set[str]) -> str:
    if base_id not in used:
        return base_id
    suffix = 2
    while f"{base_id}-{suffix}" in used:
        suffix += 1
    return f"{base_id}-{suffix}"


def _gram(rows: list[QVector]) -> QMatrix:
    gram = QMatrix(tuple(rows))
    require_gram(gram)
    return gram
