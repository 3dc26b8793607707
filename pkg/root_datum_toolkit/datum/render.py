from __future__ import annotations

from fractions import Fraction
from typing import Any

from .embedding import CheckReport
from .exact_linalg import QMatrix, QVector, format_rational
from .ingest import datum_to_document
from .model import AbelianGroupStructure, ClassificationReport, DatumType, EuclideanRootDatum
from .spectrum import DominantWeight, ScaledEigenvalue, to_absolute


def _sorted_dict(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _sorted_dict(value[k]) for k in sorted(value)}
    if isinstance(value, list):
        return [_sorted_dict(item) for item in value]
    return value


def render_vector(v: QVector) -> list[str]:
    return [format_rational(x) for x in v]


def render_matrix(matrix: QMatrix) -> list[list[str]]:
    return [render_vector(row) for row in matrix.entries]


def render_group(group: AbelianGroupStructure) -> dict[str, Any]:
    return {
        "label": group.label,
        "freeRank": group.free_rank,
        "invariantFactors": list(group.invariant_factors),
        "order": group.order,
    }


def render_type(datum_type: DatumType) -> dict[str, Any]:
    return {
        "type": datum_type.label,
        "family": datum_type.type_tag.value,
        "rank": datum_type.rank,
        "lengthSq": format_rational(datum_type.length_sq),
        "case": datum_type.case,
    }


def render_classification(report: ClassificationReport) -> dict[str, Any]:
    return _sorted_dict(
        {
            **render_type(report.datum_type),
            "pi1": report.fundamental_group.label,
            "fundamentalGroup": render_group(report.fundamental_group),
            "cubicBasis": [render_vector(v) for v in report.cubic_basis.vectors],
            "signs": list(report.sign_vector),
            "epsilonBasis": [render_vector(v) for v in report.signed_basis],
        }
    )


def render_datum(datum: EuclideanRootDatum) -> dict[str, Any]:
    return _sorted_dict(datum_to_document(datum))


def render_spectrum(
    entries: list[tuple[DominantWeight, ScaledEigenvalue]], length_sq: Fraction | None = None
) -> list[dict[str, Any]]:
    """Scaled eigenvalues; with ``length_sq`` also the absolute ``4 pi^2 / L^2`` multiple."""
    rendered = []
    for weight, value in entries:
        item: dict[str, Any] = {"k": list(weight.k), "lambda_scaled": format_rational(value.value)}
        if length_sq is not None:
            item["lambda_absolute"] = to_absolute(value, length_sq)
        rendered.append(item)
    return rendered


def render_check_report(report: CheckReport) -> dict[str, Any]:
    return {
        "samples": report.samples,
        "tolerance": report.tolerance,
        "maxPlanarityResidual": report.max_planarity_residual,
        "maxOrthogonalityResidual": report.max_orthogonality_residual,
        "maxMetricDistortion": report.max_metric_distortion,
        "latticeClosureResidual": report.lattice_closure_residual,
        "converseViolations": report.converse_violations,
        "checks": {
            "planarity": report.planarity_ok,
            "orthogonality": report.orthogonality_ok,
            "isometry": report.isometry_ok,
            "lattice": report.lattice_ok,
        },
        "pass": report.passed,
    }
