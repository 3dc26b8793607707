"""Exact rational vectors and matrices, Gram-form inner products and integer normal forms.

Everything here is immutable and pure. Lengths are only ever compared squared, so no
irrational number is produced anywhere in this module.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import LinalgError

logger = logging.getLogger(__name__)

Rational = Fraction
QVector = tuple[Fraction, ...]
RationalLike = Union[Fraction, int, str]


def parse_rational(value: RationalLike) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int. Floats are rejected to keep inputs exact."""
    if isinstance(value, bool):
        raise LinalgError(f"Not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise LinalgError(f"Not a rational: {value!r}")
    text = value.strip()
    numerator, sep, denominator = text.partition("/")
    try:
        num = int(numerator)
        den = int(denominator) if sep else 1
    except ValueError as exc:
        raise LinalgError(f"Malformed rational {value!r}") from exc
    if den == 0:
        raise LinalgError(f"Zero denominator in {value!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def vector(values: Iterable[RationalLike]) -> QVector:
    return tuple(parse_rational(item) for item in values)


def unit_vector(dim: int, index: int) -> QVector:
    return tuple(Fraction(1 if k == index else 0) for k in range(dim))


def dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    if len(x) != len(y):
        raise LinalgError(f"Dimension mismatch: {len(x)} vs {len(y)}")
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def add(x: QVector, y: QVector) -> QVector:
    if len(x) != len(y):
        raise LinalgError(f"Dimension mismatch: {len(x)} vs {len(y)}")
    return tuple(a + b for a, b in zip(x, y))


def sub(x: QVector, y: QVector) -> QVector:
    if len(x) != len(y):
        raise LinalgError(f"Dimension mismatch: {len(x)} vs {len(y)}")
    return tuple(a - b for a, b in zip(x, y))


def scale(c: RationalLike, x: QVector) -> QVector:
    factor = parse_rational(c)
    return tuple(factor * a for a in x)


def neg(x: QVector) -> QVector:
    return tuple(-a for a in x)


def is_zero(x: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in x)


def is_integral(x: Sequence[Fraction]) -> bool:
    return all(a.denominator == 1 for a in x)


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for value in values:
        den = den * value.denominator // math.gcd(den, value.denominator)
    return den


def canonical_sign(x: QVector) -> QVector:
    """Return ``x`` or ``-x``, whichever has a positive first nonzero coordinate."""
    for a in x:
        if a != 0:
            return x if a > 0 else neg(x)
    return x


@dataclass(frozen=True)
class QMatrix:
    entries: tuple[tuple[Fraction, ...], ...]
    ncols: int = -1

    def __post_init__(self) -> None:
        if not self.entries:
            raise LinalgError("Matrix needs at least one row")
        width = len(self.entries[0])
        if any(len(row) != width for row in self.entries):
            raise LinalgError("Matrix rows have different lengths")
        if self.ncols not in (-1, width):
            raise LinalgError("Column count does not match the entries")
        object.__setattr__(self, "ncols", width)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RationalLike]]) -> QMatrix:
        return cls(tuple(vector(row) for row in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RationalLike]], dim: int | None = None) -> QMatrix:
        if not columns:
            if dim is None:
                raise LinalgError("Empty column list needs an explicit dimension")
            return cls(tuple(() for _ in range(dim)))
        cols = [vector(col) for col in columns]
        height = len(cols[0])
        if any(len(col) != height for col in cols):
            raise LinalgError("Columns have different lengths")
        return cls(tuple(tuple(col[i] for col in cols) for i in range(height)))

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls(tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[RationalLike]) -> QMatrix:
        diag = vector(values)
        n = len(diag)
        return cls(tuple(tuple(diag[i] if i == j else Fraction(0) for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return self.ncols

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> QVector:
        return self.entries[i]

    def column(self, j: int) -> QVector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[QVector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> QMatrix:
        return QMatrix.from_columns(list(self.entries), dim=self.cols)

    def __matmul__(self, other: QMatrix) -> QMatrix:
        if self.cols != other.rows:
            raise LinalgError(f"Cannot multiply {self.shape} by {other.shape}")
        other_cols = other.columns()
        if not other_cols:
            return QMatrix(tuple(() for _ in range(self.rows)))
        return QMatrix(tuple(tuple(dot(row, col) for col in other_cols) for row in self.entries))

    def __add__(self, other: QMatrix) -> QMatrix:
        if self.shape != other.shape:
            raise LinalgError(f"Cannot add {self.shape} and {other.shape}")
        return QMatrix(tuple(add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: QMatrix) -> QMatrix:
        if self.shape != other.shape:
            raise LinalgError(f"Cannot subtract {self.shape} and {other.shape}")
        return QMatrix(tuple(sub(a, b) for a, b in zip(self.entries, other.entries)))

    def scaled(self, c: RationalLike) -> QMatrix:
        return QMatrix(tuple(scale(c, row) for row in self.entries))

    def apply(self, x: Sequence[Fraction]) -> QVector:
        if len(x) != self.cols:
            raise LinalgError(f"Cannot apply {self.shape} matrix to a vector of length {len(x)}")
        return tuple(dot(row, x) for row in self.entries)

    def apply_covector(self, alpha: Sequence[Fraction]) -> QVector:
        """Row vector times matrix, i.e. the pull-back ``alpha o M``."""
        if len(alpha) != self.rows:
            raise LinalgError(f"Cannot apply covector of length {len(alpha)} to {self.shape} matrix")
        return tuple(dot(alpha, col) for col in self.columns())

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def is_integer(self) -> bool:
        return all(is_integral(row) for row in self.entries)

    def determinant(self) -> Fraction:
        if not self.is_square():
            raise LinalgError(f"Determinant of non-square {self.shape} matrix")
        work = [list(row) for row in self.entries]
        n = self.rows
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            p = work[col][col]
            det *= p
            for r in range(col + 1, n):
                factor = work[r][col] / p
                if factor:
                    work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return det

    def inverse(self) -> QMatrix:
        if not self.is_square():
            raise LinalgError(f"Inverse of non-square {self.shape} matrix")
        n = self.rows
        aug = QMatrix(tuple(row + unit_vector(n, i) for i, row in enumerate(self.entries)))
        reduced, pivots = rref(aug)
        if pivots[:n] != list(range(n)):
            raise LinalgError("Matrix is singular")
        return QMatrix(tuple(reduced.entries[i][n:] for i in range(n)))


@dataclass(frozen=True)
class SNFResult:
    U: QMatrix
    D: QMatrix
    V: QMatrix

    @property
    def diagonal(self) -> list[int]:
        return [int(self.D.entries[i][i]) for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def rref(matrix: QMatrix) -> tuple[QMatrix, list[int]]:
    work = [list(row) for row in matrix.entries]
    rows, cols = matrix.rows, matrix.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        p = work[r][c]
        work[r] = [a / p for a in work[r]]
        for i in range(rows):
            if i != r and work[i][c] != 0:
                factor = work[i][c]
                work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return QMatrix(tuple(tuple(row) for row in work), ncols=cols), pivots


def rank(matrix: QMatrix) -> int:
    if matrix.cols == 0:
        return 0
    return len(rref(matrix)[1])


def vectors_rank(vectors: Sequence[QVector], dim: int) -> int:
    if not vectors:
        return 0
    return rank(QMatrix.from_columns(vectors, dim=dim))


def nullspace(matrix: QMatrix) -> list[QVector]:
    """Rational basis of ``{x : Mx = 0}``, one vector per free column."""
    reduced, pivots = rref(matrix)
    free = [c for c in range(matrix.cols) if c not in pivots]
    basis: list[QVector] = []
    for f in free:
        x = [Fraction(0)] * matrix.cols
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -reduced.entries[r][f]
        basis.append(tuple(x))
    return basis


def solve(B: QMatrix, v: Sequence[Fraction]) -> QVector | None:
    """Unique rational solution of ``Bx = v``; ``None`` when the system is inconsistent."""
    if len(v) != B.rows:
        raise LinalgError(f"Dimension mismatch: matrix has {B.rows} rows, vector has {len(v)} entries")
    k = B.cols
    aug = QMatrix(tuple(row + (v[i],) for i, row in enumerate(B.entries)))
    reduced, pivots = rref(aug)
    if k in pivots:
        return None
    if len(pivots) != k:
        raise LinalgError("Columns are linearly dependent")
    return tuple(reduced.entries[i][k] for i in range(k))


def integer_solve(B: QMatrix, v: Sequence[Fraction]) -> QVector | None:
    """Integer ``x`` with ``Bx = v`` if one exists; ``None`` otherwise."""
    solution = solve(B, v)
    if solution is None or not is_integral(solution):
        return None
    return solution


def require_gram(G: QMatrix) -> None:
    if not _gram_ok(G):
        raise LinalgError("Gram matrix must be symmetric positive definite")


@lru_cache(maxsize=256)
def _gram_ok(G: QMatrix) -> bool:
    if not G.is_symmetric():
        return False
    # Sylvester: all leading principal minors positive.
    for k in range(1, G.rows + 1):
        minor = QMatrix(tuple(row[:k] for row in G.entries[:k]))
        if minor.determinant() <= 0:
            return False
    return True


def inner(G: QMatrix, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    if len(x) != G.rows or len(y) != G.rows:
        raise LinalgError(f"Dimension mismatch: gram is {G.rows}x{G.cols}, vectors {len(x)} and {len(y)}")
    require_gram(G)
    return dot(x, G.apply(y))


def norm_sq(G: QMatrix, x: Sequence[Fraction]) -> Fraction:
    return inner(G, x, x)


@lru_cache(maxsize=256)
def gram_inverse(G: QMatrix) -> QMatrix:
    require_gram(G)
    return G.inverse()


def smith_normal_form(matrix: QMatrix) -> SNFResult:
    """Smith normal form ``U A V = D`` with unimodular ``U``, ``V``.

    Pivot: smallest absolute nonzero entry of the remaining block, ties broken row-major.
    """
    if not matrix.is_integer():
        raise LinalgError("Smith normal form needs an integer matrix")
    m, n = matrix.rows, matrix.cols
    a = [[int(x) for x in row] for row in matrix.entries]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    logger.debug("smith_normal_form on %dx%d matrix", m, n)

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, factor: int) -> None:
        a[target] = [x + factor * y for x, y in zip(a[target], a[source])]
        u[target] = [x + factor * y for x, y in zip(u[target], u[source])]

    def add_col(target: int, source: int, factor: int) -> None:
        for row in a:
            row[target] += factor * row[source]
        for row in v:
            row[target] += factor * row[source]

    for t in range(min(m, n)):
        while True:
            pivot = _smallest_entry(a, t, m, n)
            if pivot is None:
                return _snf_result(a, u, v, m, n)
            i, j = pivot
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            clean = True
            for r in range(t + 1, m):
                q = a[r][t] // p
                if q:
                    add_row(r, t, -q)
                if a[r][t]:
                    clean = False
            for c in range(t + 1, n):
                q = a[t][c] // p
                if q:
                    add_col(c, t, -q)
                if a[t][c]:
                    clean = False
            if not clean:
                continue
            offender = next(
                (r for r in range(t + 1, m) for c in range(t + 1, n) if a[r][c] % p),
                None,
            )
            if offender is not None:
                add_row(t, offender, 1)
                continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return _snf_result(a, u, v, m, n)


def _smallest_entry(a: list[list[int]], t: int, m: int, n: int) -> tuple[int, int] | None:
    best: tuple[int, int] | None = None
    best_abs = 0
    for i in range(t, m):
        for j in range(t, n):
            value = abs(a[i][j])
            if value and (best is None or value < best_abs):
                best, best_abs = (i, j), value
    return best


def _snf_result(a: list[list[int]], u: list[list[int]], v: list[list[int]], m: int, n: int) -> SNFResult:
    return SNFResult(
        U=QMatrix.from_rows(u),
        D=QMatrix(tuple(tuple(Fraction(x) for x in row) for row in a), ncols=n),
        V=QMatrix.from_rows(v),
    )


def hermite_rows(rows: Sequence[Sequence[int]], width: int) -> list[list[int]]:
    """Row-style Hermite normal form; returns the nonzero rows (a Z-basis of their span)."""
    work = [list(row) for row in rows if any(row)]
    pivot_row = 0
    for col in range(width):
        while True:
            candidates = [r for r in range(pivot_row, len(work)) if work[r][col]]
            if not candidates:
                break
            best = min(candidates, key=lambda r: (abs(work[r][col]), r))
            work[pivot_row], work[best] = work[best], work[pivot_row]
            p = work[pivot_row][col]
            done = True
            for r in range(pivot_row + 1, len(work)):
                q = work[r][col] // p
                if q:
                    work[r] = [x - q * y for x, y in zip(work[r], work[pivot_row])]
                if work[r][col]:
                    done = False
            if done:
                break
        if pivot_row < len(work) and work[pivot_row][col]:
            if work[pivot_row][col] < 0:
                work[pivot_row] = [-x for x in work[pivot_row]]
            p = work[pivot_row][col]
            for r in range(pivot_row):
                q = work[r][col] // p
                if q:
                    work[r] = [x - q * y for x, y in zip(work[r], work[pivot_row])]
            pivot_row += 1
    return [row for row in work[:pivot_row] if any(row)]


def lattice_basis(generators: Sequence[QVector], dim: int) -> list[QVector]:
    """Canonical (Hermite) Z-basis of the Z-span of rational ``generators``."""
    if not generators:
        return []
    den = common_denominator(x for g in generators for x in g)
    scaled = [[int(x * den) for x in g] for g in generators]
    return [tuple(Fraction(x, den) for x in row) for row in hermite_rows(scaled, dim)]


def integer_kernel(matrix: QMatrix) -> list[QVector]:
    """Z-basis of ``{x in Z^n : Mx = 0}`` for a rational matrix ``M``."""
    den = common_denominator(x for row in matrix.entries for x in row)
    scaled = matrix.scaled(den)
    snf = smith_normal_form(scaled)
    r = snf.rank
    kernel = [snf.V.column(j) for j in range(r, matrix.cols)]
    return lattice_basis(kernel, matrix.cols)
