from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any

from .errors import LatticeError, RootSystemError, ToolkitError
from .exact_linalg import (
    QMatrix,
    QVector,
    format_rational,
    gram_inverse,
    is_zero,
    rank,
    require_gram,
)


@dataclass(frozen=True)
class Lattice:
    ambient_dim: int
    basis: QMatrix
    gram: QMatrix

    def __post_init__(self) -> None:
        if self.ambient_dim < 1:
            raise LatticeError("Ambient dimension must be positive")
        if self.basis.rows != self.ambient_dim:
            raise LatticeError(f"Basis has {self.basis.rows} rows, ambient dimension is {self.ambient_dim}")
        if self.gram.shape != (self.ambient_dim, self.ambient_dim):
            raise LatticeError(
                f"Gram matrix shape {self.gram.shape} does not match dimension {self.ambient_dim}"
            )
        require_gram(self.gram)
        if self.basis.cols > self.ambient_dim:
            raise LatticeError("More basis vectors than the ambient dimension")
        if rank(self.basis) != self.basis.cols:
            raise LatticeError("Basis vectors are linearly dependent")

    @classmethod
    def from_vectors(cls, vectors: list[QVector], gram: QMatrix) -> Lattice:
        return cls(gram.rows, QMatrix.from_columns(vectors, dim=gram.rows), gram)

    @classmethod
    def standard(cls, dim: int, length_sq: Fraction | int = 1) -> Lattice:
        return cls(dim, QMatrix.identity(dim), QMatrix.identity(dim).scaled(length_sq))

    @property
    def rank(self) -> int:
        return self.basis.cols

    @property
    def is_full(self) -> bool:
        return self.rank == self.ambient_dim

    def vectors(self) -> list[QVector]:
        return self.basis.columns()

    @cached_property
    def coefficient_gram(self) -> QMatrix:
        """Gram matrix of the basis itself, ``B^T G B``."""
        if self.rank == 0:
            raise LatticeError("Rank-zero lattice has no coefficient gram")
        return self.basis.transpose() @ self.gram @ self.basis

    @cached_property
    def covolume_sq(self) -> Fraction:
        if self.rank == 0:
            return Fraction(1)
        return self.coefficient_gram.determinant()


@dataclass(frozen=True)
class OrthogonalBasis:
    vectors: tuple[QVector, ...]
    squared_lengths: tuple[Fraction, ...]

    @property
    def is_cubic(self) -> bool:
        return len(set(self.squared_lengths)) <= 1

    @property
    def common_length_sq(self) -> Fraction | None:
        return self.squared_lengths[0] if self.is_cubic and self.squared_lengths else None


@dataclass(frozen=True)
class AbelianGroupStructure:
    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ToolkitError("Free rank must be nonnegative")
        for small, big in zip(self.invariant_factors, self.invariant_factors[1:]):
            if big % small:
                raise ToolkitError(f"Invariant factor {small} does not divide {big}")
        if any(f < 2 for f in self.invariant_factors):
            raise ToolkitError("Invariant factors must be at least 2")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        total = 1
        for f in self.invariant_factors:
            total *= f
        return total

    @property
    def label(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{f}" for f in self.invariant_factors]
        return " x ".join(parts) if parts else "1"


class Family(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    BC = "BC"


@dataclass(frozen=True)
class FamilyTag:
    family: Family
    rank_parameter: int

    def __post_init__(self) -> None:
        minimum = 2 if self.family is Family.D else 1
        if self.rank_parameter < minimum:
            raise RootSystemError(f"Family {self.family.value} needs rank >= {minimum}")

    @property
    def label(self) -> str:
        # rank_parameter counts the epsilon coordinates; A_{r-1} lives on r of them.
        if self.family is Family.A:
            return f"A{self.rank_parameter - 1}"
        return f"{self.family.value}{self.rank_parameter}"


@dataclass(frozen=True)
class RootSystem:
    ambient_dim: int
    gram: QMatrix
    roots: tuple[QVector, ...] = ()

    def __post_init__(self) -> None:
        if self.gram.shape != (self.ambient_dim, self.ambient_dim):
            raise RootSystemError("Gram matrix does not match the ambient dimension")
        require_gram(self.gram)
        for root in self.roots:
            if len(root) != self.ambient_dim:
                raise RootSystemError(f"Root of length {len(root)} in dimension {self.ambient_dim}")
            if is_zero(root):
                raise RootSystemError("Zero covector is not a root")
        object.__setattr__(self, "roots", tuple(sorted(set(self.roots))))

    def __contains__(self, alpha: object) -> bool:
        return alpha in self._root_set

    def __len__(self) -> int:
        return len(self.roots)

    @cached_property
    def _root_set(self) -> frozenset[QVector]:
        return frozenset(self.roots)

    @cached_property
    def dual_gram(self) -> QMatrix:
        return gram_inverse(self.gram)


@dataclass(frozen=True)
class WeylGroup:
    ambient_dim: int
    elements: tuple[QMatrix, ...]
    generators: tuple[QMatrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class DatumType:
    type_tag: Family
    rank: int
    length_sq: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "type_tag", Family(self.type_tag))
        object.__setattr__(self, "length_sq", Fraction(self.length_sq))
        if self.rank < 1:
            raise ToolkitError("Rank must be positive")
        if self.length_sq <= 0:
            raise ToolkitError("Squared side length must be positive")
        if self.type_tag is Family.D and self.rank == 1:
            # D-hat_1 and A-hat_0 are the same datum; report the A label.
            object.__setattr__(self, "type_tag", Family.A)

    @property
    def label(self) -> str:
        if self.type_tag is Family.A:
            return f"A{self.rank - 1}-hat"
        return f"{self.type_tag.value}{self.rank}-hat"

    @property
    def case(self) -> str:
        return "II" if self.type_tag is Family.A else "I"


@dataclass(frozen=True)
class EuclideanRootDatum:
    gram: QMatrix
    lattice: Lattice
    roots: RootSystem

    def __post_init__(self) -> None:
        if self.lattice.gram != self.gram or self.roots.gram != self.gram:
            raise ToolkitError("Lattice, roots and datum must share one gram matrix")

    @property
    def dim(self) -> int:
        return self.gram.rows


@dataclass(frozen=True)
class ClassificationReport:
    datum_type: DatumType
    cubic_basis: OrthogonalBasis
    sign_vector: tuple[int, ...]
    fundamental_group: AbelianGroupStructure
    case: str

    @property
    def signed_basis(self) -> tuple[QVector, ...]:
        return tuple(
            tuple(sign * x for x in vec) for sign, vec in zip(self.sign_vector, self.cubic_basis.vectors)
        )


@dataclass(frozen=True)
class Issue:
    path: str
    message: str
    witness: tuple[str, ...] | None = None


@dataclass(frozen=True)
class Diagnostics:
    issues: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues


@dataclass(frozen=True)
class Report:
    status: str
    payload: dict[str, Any] = field(default_factory=dict)
    diagnostics: tuple[str, ...] = ()

    @property
    def exit_code(self) -> int:
        return {"ok": 0, "invalid": 1, "error": 2}[self.status]


def witness_strings(vec: QVector) -> tuple[str, ...]:
    return tuple(format_rational(x) for x in vec)
