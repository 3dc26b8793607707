"""Torus part of the extrinsically symmetric embedding, as a trigonometric polynomial.

``Phi(H) = v_0 + sum_mu exp(2 pi i mu(H)) v_mu`` over the nonzero weights ``mu``; ``H`` is
given in cubic-basis coordinates, so ``mu(H)`` is an integer combination of them.
Case I uses the weights ``±eps_j``, Case II the weights ``eps_j``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np

from .errors import EmbeddingError
from .model import ClassificationReport

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
TWO_PI = 2 * math.pi


@dataclass(frozen=True, eq=False)
class TorusEmbedding:
    rank: int
    length: float
    case: str
    weights: np.ndarray  # (m, r) integers
    amplitudes: np.ndarray  # (m, d) complex, row i is v_mu for weights[i]
    base: np.ndarray  # (d,) complex, the zero-weight component

    @property
    def complex_dim(self) -> int:
        return int(self.amplitudes.shape[1])

    @property
    def zero_radius(self) -> float:
        return float(np.linalg.norm(self.base))

    def with_amplitudes(self, amplitudes: np.ndarray) -> TorusEmbedding:
        return replace(self, amplitudes=np.asarray(amplitudes, dtype=complex))


@dataclass(frozen=True)
class CheckReport:
    samples: int
    tolerance: float
    max_planarity_residual: float
    max_orthogonality_residual: float
    max_metric_distortion: float
    lattice_closure_residual: float
    converse_violations: int

    @property
    def planarity_ok(self) -> bool:
        return self.max_planarity_residual <= self.tolerance

    @property
    def orthogonality_ok(self) -> bool:
        return self.max_orthogonality_residual <= self.tolerance

    @property
    def isometry_ok(self) -> bool:
        return self.max_metric_distortion <= self.tolerance

    @property
    def lattice_ok(self) -> bool:
        return self.lattice_closure_residual <= self.tolerance and self.converse_violations == 0

    @property
    def passed(self) -> bool:
        return self.planarity_ok and self.orthogonality_ok and self.isometry_ok and self.lattice_ok


def build_torus_embedding(report: ClassificationReport, a: float = 0.0) -> TorusEmbedding:
    """Canonical embedding: each weight gets its own hermitian coordinate axis.

    Case I splits every circle evenly, ``|v_eps_j| = |v_-eps_j| = L / (2 pi sqrt 2)``;
    Case II uses ``|v_eps_j| = L / (2 pi)``. Either way each circle has radius ``L / (2 pi)``.
    The zero-weight component sits on an extra axis with norm ``a``.
    """
    if a < 0:
        raise EmbeddingError("Zero-component radius must be nonnegative")
    r = report.datum_type.rank
    length = math.sqrt(float(report.datum_type.length_sq))
    case = report.case
    rows: list[list[int]] = []
    for j in range(r):
        unit = [0] * r
        unit[j] = 1
        rows.append(unit)
        if case == "I":
            rows.append([-x for x in unit])
    weights = np.array(rows, dtype=np.int64).reshape(len(rows), r)
    sigma = length / TWO_PI / (math.sqrt(2) if case == "I" else 1.0)
    m = len(rows)
    amplitudes = np.zeros((m, m + 1), dtype=complex)
    amplitudes[np.arange(m), np.arange(m)] = sigma
    base = np.zeros(m + 1, dtype=complex)
    base[m] = a
    logger.debug("built case %s torus embedding: rank %d, %d weights, L = %g", case, r, m, length)
    return TorusEmbedding(r, length, case, weights, amplitudes, base)


def phi_torus(embedding: TorusEmbedding, h: Sequence[float]) -> np.ndarray:
    """Realified image point ``(Re Phi, Im Phi)``."""
    return _realify(_phi_complex(embedding, h))


def run_checks(embedding: TorusEmbedding, samples: int = 64, tol: float = DEFAULT_TOLERANCE) -> CheckReport:
    """Planarity, orthogonality, isometry and lattice closure over a regular sample grid.

    Orthogonality and metric residuals are relative to ``L^2``; closure residuals to ``L``.
    """
    if samples < 8:
        raise EmbeddingError("At least 8 samples are needed")
    if tol <= 0:
        raise EmbeddingError("Tolerance must be positive")
    r = embedding.rank
    scale = embedding.length**2
    planarity = orthogonality = distortion = 0.0
    for h in _sample_grid(r, samples):
        velocities = [_derivative(embedding, h, j, 1) for j in range(r)]
        for j, velocity in enumerate(velocities):
            third = _derivative(embedding, h, j, 3)
            speed = np.linalg.norm(velocity)
            residual = np.linalg.norm(third + TWO_PI**2 * velocity) / max(speed, 1e-300)
            planarity = max(planarity, float(residual))
            distortion = max(distortion, abs(float(np.vdot(velocity, velocity).real) - scale) / scale)
            for k in range(j + 1, r):
                cross = abs(float(np.vdot(velocity, velocities[k]).real))
                orthogonality = max(orthogonality, cross / scale)

    origin = _phi_complex(embedding, np.zeros(r))
    closure = 0.0
    for h in _lattice_test_points(r):
        drift = float(np.linalg.norm(_phi_complex(embedding, h) - origin))
        closure = max(closure, drift / embedding.length)
    violations = 0
    for h in _sample_grid(r, samples):
        off_lattice = np.max(np.abs(h - np.round(h))) > tol
        if off_lattice and np.linalg.norm(_phi_complex(embedding, h) - origin) <= tol * embedding.length:
            violations += 1

    report = CheckReport(
        samples=samples,
        tolerance=tol,
        max_planarity_residual=planarity,
        max_orthogonality_residual=orthogonality,
        max_metric_distortion=distortion,
        lattice_closure_residual=closure,
        converse_violations=violations,
    )
    logger.debug("embedding checks: %s", report)
    return report


def spherical_function(embedding: TorusEmbedding, h: Sequence[float]) -> complex:
    """``|v_0|^2 / sigma^2 + 2 sum cos(2 pi eps_j(H))`` in Case I.

    Case II has no constant term: ``sum exp(-2 pi i eps_j(H))``.
    """
    h = _coords(embedding, h)
    if embedding.case == "I":
        a = (embedding.zero_radius / _sigma(embedding)) ** 2
        return complex(a + 2 * float(np.sum(np.cos(TWO_PI * h))))
    return complex(np.sum(np.exp(-1j * TWO_PI * h)))


def spherical_function_from_inner_product(embedding: TorusEmbedding, h: Sequence[float]) -> complex:
    """``(v, Phi(H))`` with ``v = Phi(0)``, divided by the squared per-weight amplitude.

    The zero component is dropped in Case II, where the constant is zero.
    """
    v = _phi_complex(embedding, np.zeros(embedding.rank))
    point = _phi_complex(embedding, h)
    if embedding.case == "II":
        v = v - embedding.base
        point = point - embedding.base
    return complex(np.sum(v * np.conj(point))) / _sigma(embedding) ** 2


def check_clifford_splitting(
    embedding: TorusEmbedding, partition: Sequence[Sequence[int]], tol: float = DEFAULT_TOLERANCE
) -> bool:
    """True iff weights from different classes occupy hermitian-orthogonal directions and
    each class is a product of orthogonal circles. Indices are 1-based."""
    r = embedding.rank
    owner: dict[int, int] = {}
    for label, block in enumerate(partition):
        if not block:
            raise EmbeddingError("Partition blocks must be nonempty")
        for index in block:
            if not 1 <= index <= r or index in owner:
                raise EmbeddingError(f"Partition is not a partition of 1..{r}")
            owner[index] = label
    if len(owner) != r:
        raise EmbeddingError(f"Partition is not a partition of 1..{r}")

    classes: list[int] = []
    for weight in embedding.weights:
        support = np.nonzero(weight)[0]
        if len(support) != 1:
            return False
        classes.append(owner[int(support[0]) + 1])

    scale = _sigma(embedding) ** 2
    rows = embedding.amplitudes
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if abs(np.vdot(rows[i], rows[j])) > tol * scale:
                return False
    return len(set(classes)) == len(partition)


def sample_points(embedding: TorusEmbedding, samples: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """``(H, Phi(H))`` rows on the same regular grid ``run_checks`` uses."""
    return [(h, phi_torus(embedding, h)) for h in _sample_grid(embedding.rank, samples)]


def _phi_complex(embedding: TorusEmbedding, h: Sequence[float]) -> np.ndarray:
    h = _coords(embedding, h)
    phases = np.exp(1j * TWO_PI * (embedding.weights @ h))
    return embedding.base + phases @ embedding.amplitudes


def _derivative(embedding: TorusEmbedding, h: np.ndarray, axis: int, order: int) -> np.ndarray:
    """``d^n/dt^n Phi(H + t e_axis)`` at ``t = 0``, as a complex vector."""
    phases = np.exp(1j * TWO_PI * (embedding.weights @ h))
    factors = (1j * TWO_PI * embedding.weights[:, axis]) ** order
    return (factors * phases) @ embedding.amplitudes


def _coords(embedding: TorusEmbedding, h: Sequence[float]) -> np.ndarray:
    arr = np.asarray(h, dtype=float)
    if arr.shape != (embedding.rank,):
        raise EmbeddingError(f"Expected {embedding.rank} coordinates, got shape {arr.shape}")
    return arr


def _sigma(embedding: TorusEmbedding) -> float:
    # Case I: first circle radius is sqrt(|v_eps|^2 + |v_-eps|^2) = sqrt 2 sigma
    if embedding.case == "I":
        return float(np.linalg.norm(embedding.amplitudes[:2])) / math.sqrt(2)
    return float(np.linalg.norm(embedding.amplitudes[0]))


def _sample_grid(r: int, samples: int) -> list[np.ndarray]:
    # coordinate j walks the grid with stride 2j+1, so axes are not in lockstep
    return [
        np.array([((s * (2 * j + 1)) % samples) / samples for j in range(r)], dtype=float)
        for s in range(samples)
    ]


def _lattice_test_points(r: int) -> list[np.ndarray]:
    points = [np.ones(r), -np.ones(r)]
    for j in range(r):
        unit = np.zeros(r)
        unit[j] = 1.0
        points.extend([unit, -unit, 3 * unit])
    return points


def _realify(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real, z.imag])
