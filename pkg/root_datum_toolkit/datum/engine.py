from __future__ import annotations

import functools
import logging
import os
from collections.abc import Callable
from typing import Any, TypeVar

import numpy as np

from .embedding import DEFAULT_TOLERANCE, build_torus_embedding, run_checks, sample_points
from .errors import ClassificationError, DecomposableError, ToolkitError
from .exact_linalg import parse_rational
from .ingest import build_datum_files, parse_datum_file
from .lattice import DEFAULT_MAX_RANK, quotient_group, same_lattice
from .model import DatumType, Family, Report
from .render import (
    render_check_report,
    render_classification,
    render_datum,
    render_group,
    render_matrix,
    render_spectrum,
    render_type,
    render_vector,
)
from .rootdatum import (
    MAX_ISOMORPHISM_RANK,
    admits_polysphere,
    classify,
    covering_family,
    fundamental_group,
    is_isomorphic,
    make_standard,
    split,
    validate,
)
from .rootsystem import DEFAULT_MAX_WEYL, gamma0, orbit_case, weyl_group
from .spectrum import (
    MultiplicitySet,
    enumerate_spectrum,
    first_eigenspace_check,
    first_eigenspace_index,
)
from .validate import render_diagnostics

logger = logging.getLogger(__name__)

_F = TypeVar("_F", bound=Callable[..., Report])


def _reported(method: _F) -> _F:
    """Turn library errors into reports: classification findings exit 1, bad input exits 2."""

    @functools.wraps(method)
    def wrapper(*args: Any, **kwargs: Any) -> Report:
        try:
            return method(*args, **kwargs)
        except DecomposableError as exc:
            return Report(
                "invalid",
                {"error": "decomposable", "factors": [render_datum(f) for f in exc.factors]},
                (str(exc),),
            )
        except ClassificationError as exc:
            return Report("invalid", {"error": _error_name(exc)}, (str(exc),))
        except ToolkitError as exc:
            logger.debug("verb failed: %s", exc)
            return Report("error", {"error": _error_name(exc)}, (str(exc),))

    return wrapper  # type: ignore[return-value]


class ToolkitEngine:
    def __init__(
        self,
        max_weyl: int = DEFAULT_MAX_WEYL,
        max_rank: int = DEFAULT_MAX_RANK,
        embed_tol: float = DEFAULT_TOLERANCE,
    ) -> None:
        self.max_weyl = max_weyl
        self.max_rank = max_rank
        self.embed_tol = embed_tol

    @_reported
    def validate(self, path: str) -> Report:
        if os.path.isdir(path):
            files = []
            all_ok = True
            for item in build_datum_files(path):
                envelope: dict[str, Any]
                if item.datum is not None:
                    envelope = render_diagnostics(validate(item.datum))
                else:
                    location = item.error.location if item.error else ""
                    failure = {"path": location, "message": str(item.error)}
                    envelope = {"ok": False, "errors": [failure]}
                all_ok = all_ok and envelope["ok"]
                files.append({"datumId": item.datum_id, "filePath": item.relative_path, **envelope})
            return Report("ok" if all_ok else "invalid", {"files": files})
        diagnostics = validate(parse_datum_file(path))
        return Report(
            "ok" if diagnostics.ok else "invalid",
            render_diagnostics(diagnostics),
            tuple(issue.message for issue in diagnostics.issues),
        )

    @_reported
    def standard(self, family: str, rank: int, length_sq: str | int = 1) -> Report:
        datum_type = DatumType(_family(family), rank, parse_rational(length_sq))
        return Report("ok", render_datum(make_standard(datum_type)))

    @_reported
    def classify(self, path: str, orbit: bool = False) -> Report:
        datum = parse_datum_file(path)
        report = classify(datum, self.max_rank)
        payload = render_classification(report)
        if orbit:
            group = weyl_group(datum.roots, self.max_weyl)
            payload["weylOrder"] = group.order
            payload["orbitCase"] = orbit_case(group, report.cubic_basis)
        return Report("ok", payload)

    @_reported
    def pi1(self, path: str) -> Report:
        datum = self._valid(path)
        if isinstance(datum, Report):
            return datum
        group = fundamental_group(datum)
        return Report("ok", {"pi1": group.label, "fundamentalGroup": render_group(group)})

    @_reported
    def split(self, path: str) -> Report:
        datum = self._valid(path)
        if isinstance(datum, Report):
            return datum
        factors = split(datum, self.max_rank)
        return Report(
            "ok",
            {"indecomposable": len(factors) == 1, "factors": [render_datum(f) for f in factors]},
        )

    @_reported
    def polysphere(self, path: str) -> Report:
        datum = self._valid(path)
        if isinstance(datum, Report):
            return datum
        return Report("ok", {"admitsPolysphere": admits_polysphere(datum, self.max_rank)})

    @_reported
    def iso(self, first_path: str, second_path: str) -> Report:
        first = self._valid(first_path)
        if isinstance(first, Report):
            return first
        second = self._valid(second_path)
        if isinstance(second, Report):
            return second
        isometry = is_isomorphic(first, second, min(self.max_rank, MAX_ISOMORPHISM_RANK))
        if isometry is None:
            return Report("invalid", {"isomorphic": False, "result": "not isomorphic"})
        return Report(
            "ok", {"isomorphic": True, "result": "isomorphic", "isometry": render_matrix(isometry)}
        )

    @_reported
    def spectrum(self, path: str, mults: str, bound: str | int, absolute: bool = False) -> Report:
        datum_type = self._type(path)
        m = MultiplicitySet.parse(mults)
        limit = parse_rational(bound)
        entries = enumerate_spectrum(datum_type, m, limit)
        return Report(
            "ok",
            {
                **render_type(datum_type),
                "multiplicities": _render_mults(m),
                "bound": render_vector((limit,))[0],
                "spectrum": render_spectrum(entries, datum_type.length_sq if absolute else None),
            },
        )

    @_reported
    def first_eigencheck(self, path: str, mults: str) -> Report:
        datum_type = self._type(path)
        m = MultiplicitySet.parse(mults)
        holds = first_eigenspace_check(datum_type, m)
        payload = {
            **render_type(datum_type),
            "multiplicities": _render_mults(m),
            "firstEigenspace": holds,
            "eigenspaceIndex": first_eigenspace_index(datum_type, m),
        }
        return Report("ok" if holds else "invalid", payload)

    @_reported
    def embed(self, path: str, samples: int = 64, tol: float | None = None, a: float = 0.0) -> Report:
        report = classify(parse_datum_file(path), self.max_rank)
        embedding = build_torus_embedding(report, a)
        checks = run_checks(embedding, samples, self.embed_tol if tol is None else tol)
        payload = {
            **render_type(report.datum_type),
            "complexDim": embedding.complex_dim,
            "zeroRadius": a,
            "checks": render_check_report(checks),
        }
        return Report("ok" if checks.passed else "invalid", payload)

    def embed_points(
        self, path: str, samples: int = 64, a: float = 0.0
    ) -> list[tuple[np.ndarray, np.ndarray]]:
        report = classify(parse_datum_file(path), self.max_rank)
        return sample_points(build_torus_embedding(report, a), samples)

    @_reported
    def covers(self, path: str) -> Report:
        datum = self._valid(path)
        if isinstance(datum, Report):
            return datum
        g0 = gamma0(datum.roots)
        members = []
        for member in covering_family(datum.roots):
            group = quotient_group(member.lattice, g0)
            members.append(
                {
                    "index": group.order,
                    "pi1": group.label,
                    "latticeBasis": [render_vector(v) for v in member.lattice.vectors()],
                    "isInput": same_lattice(member.lattice, datum.lattice),
                }
            )
        return Report("ok", {"coverings": members})

    def _valid(self, path: str) -> Any:
        datum = parse_datum_file(path)
        diagnostics = validate(datum)
        if not diagnostics.ok:
            return Report(
                "invalid",
                render_diagnostics(diagnostics),
                tuple(issue.message for issue in diagnostics.issues),
            )
        return datum

    def _type(self, path: str) -> DatumType:
        return classify(parse_datum_file(path), self.max_rank).datum_type


def _family(letter: str) -> Family:
    try:
        return Family(letter.strip().upper().removesuffix("-HAT"))
    except ValueError as exc:
        raise ToolkitError(f"Unknown family {letter!r}; expected one of A, B, C, D, BC") from exc


def _render_mults(m: MultiplicitySet) -> dict[str, int]:
    return {"m1": m.m1, "m2": m.m2, "mPlus": m.m_plus, "mMinus": m.m_minus}


def _error_name(exc: Exception) -> str:
    name = type(exc).__name__
    return name[: -len("Error")] if name.endswith("Error") else name
