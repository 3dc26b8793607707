"""Full and partial lattices in a Euclidean space given by a Gram matrix.

Vector enumeration works in coefficient space with the Cauchy-Schwarz box
``|c_i| <= sqrt((Q^-1)_ii * bound)`` where ``Q = B^T G B``; there is no basis reduction,
so ranks are capped (``max_rank``) to keep the boxes at desk scale.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from fractions import Fraction

from .errors import LatticeError, RankTooLargeError
from .exact_linalg import (
    QMatrix,
    QVector,
    canonical_sign,
    common_denominator,
    integer_kernel,
    integer_solve,
    inner,
    norm_sq,
    nullspace,
    smith_normal_form,
    vectors_rank,
)
from .model import AbelianGroupStructure, Lattice, OrthogonalBasis

logger = logging.getLogger(__name__)

DEFAULT_MAX_RANK = 8


def membership(lattice: Lattice, v: Sequence[Fraction]) -> bool:
    if len(v) != lattice.ambient_dim:
        raise LatticeError(f"Vector of length {len(v)} in a lattice of dimension {lattice.ambient_dim}")
    return integer_solve(lattice.basis, v) is not None


def contains_lattice(lattice: Lattice, sub: Lattice) -> bool:
    if sub.ambient_dim != lattice.ambient_dim:
        raise LatticeError("Lattices live in different dimensions")
    return all(membership(lattice, v) for v in sub.vectors())


def same_lattice(first: Lattice, second: Lattice) -> bool:
    return (
        first.gram == second.gram
        and first.rank == second.rank
        and contains_lattice(first, second)
        and contains_lattice(second, first)
    )


def dual_lattice(lattice: Lattice) -> Lattice:
    """Covectors integral on ``lattice``, with the dual form ``G^-1`` as their gram."""
    if not lattice.is_full:
        raise LatticeError("Dual lattice needs a full-rank lattice")
    basis = lattice.basis.inverse().transpose()
    return Lattice(lattice.ambient_dim, basis, lattice.gram.inverse())


def vectors_within(lattice: Lattice, bound: Fraction, max_rank: int = DEFAULT_MAX_RANK) -> list[QVector]:
    """Nonzero lattice vectors of squared length at most ``bound``, shortest first."""
    k = lattice.rank
    if k > max_rank:
        raise RankTooLargeError(k, max_rank)
    if k == 0 or bound <= 0:
        return []
    q = lattice.coefficient_gram
    q_inv = q.inverse()
    box = [math.isqrt(math.floor(q_inv.entries[i][i] * bound)) for i in range(k)]
    logger.debug("enumerating rank-%d lattice in box %s", k, box)
    den = common_denominator(x for row in q.entries for x in row)
    q_int = [[int(x * den) for x in row] for row in q.entries]
    limit = bound * den
    found: list[tuple[int, QVector]] = []
    for coeffs in itertools.product(*(range(-b, b + 1) for b in box)):
        if not any(coeffs):
            continue
        length = sum(
            coeffs[i] * sum(q_int[i][j] * coeffs[j] for j in range(k)) for i in range(k)
        )
        if length <= limit:
            found.append((length, lattice.basis.apply(tuple(Fraction(c) for c in coeffs))))
    found.sort(key=lambda item: (item[0], _vector_key(item[1])))
    return [vec for _, vec in found]


def shortest_vectors(lattice: Lattice, max_rank: int = DEFAULT_MAX_RANK) -> list[QVector]:
    if not lattice.is_full:
        raise LatticeError("Shortest vectors are computed for full lattices")
    if lattice.rank > max_rank:
        raise RankTooLargeError(lattice.rank, max_rank)
    q = lattice.coefficient_gram
    bound = min(q.entries[i][i] for i in range(lattice.rank))
    candidates = vectors_within(lattice, bound, max_rank)
    shortest = min(norm_sq(lattice.gram, v) for v in candidates)
    return [v for v in candidates if norm_sq(lattice.gram, v) == shortest]


def orthogonal_basis(lattice: Lattice, max_rank: int = DEFAULT_MAX_RANK) -> OrthogonalBasis | None:
    """Orthogonal basis with integer span equal to ``lattice``, or ``None`` if it is not rectangular.

    Such a basis is unique up to sign and order; the returned one has each vector's first
    nonzero coordinate positive and is ordered by squared length, then coordinates.
    """
    k = lattice.rank
    if k > max_rank:
        raise RankTooLargeError(k, max_rank)
    if k == 0:
        return OrthogonalBasis((), ())
    q = lattice.coefficient_gram
    # The k-th successive minimum is at most the longest given basis vector.
    bound = max(q.entries[i][i] for i in range(k))
    reps: list[QVector] = []
    seen: set[QVector] = set()
    for vec in vectors_within(lattice, bound, max_rank):
        rep = canonical_sign(vec)
        if rep not in seen:
            seen.add(rep)
            reps.append(rep)
    reps.sort(key=lambda v: (norm_sq(lattice.gram, v), _vector_key(v)))
    norms = [norm_sq(lattice.gram, v) for v in reps]
    target = lattice.covolume_sq
    smallest = norms[0] if norms else Fraction(0)

    chosen: list[int] = []

    def search(start: int, product: Fraction) -> bool:
        if len(chosen) == k:
            return product == target
        remaining = k - len(chosen)
        if product * smallest**remaining > target:
            return False
        for idx in range(start, len(reps)):
            if all(inner(lattice.gram, reps[idx], reps[j]) == 0 for j in chosen):
                chosen.append(idx)
                if search(idx + 1, product * norms[idx]):
                    return True
                chosen.pop()
        return False

    if not search(0, Fraction(1)):
        return None
    return OrthogonalBasis(
        vectors=tuple(reps[i] for i in chosen),
        squared_lengths=tuple(norms[i] for i in chosen),
    )


def quotient_group(lattice: Lattice, sub: Lattice) -> AbelianGroupStructure:
    if sub.ambient_dim != lattice.ambient_dim:
        raise LatticeError("Lattices live in different dimensions")
    coords: list[QVector] = []
    for v in sub.vectors():
        c = integer_solve(lattice.basis, v)
        if c is None:
            raise LatticeError("Sublattice is not contained in the lattice")
        coords.append(c)
    free_rank = lattice.rank - sub.rank
    if not coords:
        return AbelianGroupStructure(free_rank=free_rank)
    snf = smith_normal_form(QMatrix.from_columns(coords, dim=lattice.rank))
    factors = tuple(d for d in snf.diagonal if d > 1)
    return AbelianGroupStructure(free_rank=free_rank, invariant_factors=factors)


def orthogonal_complement(gram: QMatrix, subspace: Sequence[QVector]) -> list[QVector]:
    dim = gram.rows
    if not subspace:
        return [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    rows = QMatrix(tuple(gram.apply_covector(p) for p in subspace))
    return nullspace(rows)


def intersect_subspace(lattice: Lattice, subspace: Sequence[QVector]) -> Lattice:
    """The lattice ``L ∩ P`` for the rational subspace ``P`` spanned by ``subspace``."""
    complement = orthogonal_complement(lattice.gram, subspace)
    if not complement:
        return lattice
    if lattice.rank == 0:
        return lattice
    constraints = QMatrix(
        tuple(lattice.gram.apply_covector(n) for n in complement)
    ) @ lattice.basis
    kernel = integer_kernel(constraints)
    return Lattice.from_vectors([lattice.basis.apply(c) for c in kernel], lattice.gram)


def splits_across(lattice: Lattice, subspaces: Sequence[Sequence[QVector]]) -> bool:
    """True iff ``L`` is the sum of its intersections with the given orthogonal subspaces."""
    gram = lattice.gram
    for i, first in enumerate(subspaces):
        for second in subspaces[i + 1 :]:
            if any(inner(gram, x, y) != 0 for x in first for y in second):
                raise LatticeError("Subspaces are not pairwise orthogonal")
    spanning = [v for block in subspaces for v in block]
    if vectors_rank(spanning, lattice.ambient_dim) != lattice.ambient_dim:
        raise LatticeError("Subspaces do not span the ambient space")
    pieces = [v for block in subspaces for v in intersect_subspace(lattice, block).vectors()]
    if len(pieces) != lattice.rank:
        return False
    summed = Lattice.from_vectors(pieces, gram)
    return quotient_group(lattice, summed).is_trivial


def _vector_key(v: QVector) -> tuple[Fraction, ...]:
    # Larger coordinates first, so e_1 precedes e_2 precedes -e_2.
    return tuple(-x for x in v)
