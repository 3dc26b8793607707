"""Euclidean root data ``(V, Gamma, R)``: validation, standard data, classification, splitting."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from fractions import Fraction

from .errors import (
    ClassificationError,
    DecomposableError,
    NotCubicError,
    NotRectangularError,
    RankTooLargeError,
    RootSystemError,
)
from .exact_linalg import QMatrix, QVector, inner, lattice_basis, norm_sq, smith_normal_form
from .lattice import (
    DEFAULT_MAX_RANK,
    intersect_subspace,
    membership,
    orthogonal_basis,
    quotient_group,
    splits_across,
    vectors_within,
)
from .model import (
    AbelianGroupStructure,
    ClassificationReport,
    DatumType,
    Diagnostics,
    EuclideanRootDatum,
    Issue,
    Lattice,
    RootSystem,
    witness_strings,
)
from .rootsystem import (
    classify_family,
    gamma0,
    gamma1,
    gamma1_witness,
    irreducible_components,
    normalize_signs,
    standard_roots,
    validate_root_system,
)

logger = logging.getLogger(__name__)

MAX_ISOMORPHISM_RANK = 6


def validate(datum: EuclideanRootDatum) -> Diagnostics:
    if not datum.lattice.is_full:
        message = f"Lattice has rank {datum.lattice.rank} in dimension {datum.dim}"
        return Diagnostics((Issue("lattice", message),))
    roots = validate_root_system(datum.roots)
    if not roots.ok:
        return Diagnostics(tuple(Issue(f"roots.{i.path}", i.message, i.witness) for i in roots.issues))

    g0 = gamma0(datum.roots)
    ordered = sorted(g0.vectors(), key=lambda v: (norm_sq(datum.gram, v), tuple(-x for x in v)))
    for v in ordered:
        if not membership(datum.lattice, v):
            return Diagnostics(
                (Issue("gamma0", "Gamma_0 is not contained in the lattice", witness_strings(v)),)
            )

    found = gamma1_witness(datum.roots, datum.lattice)
    if found is not None:
        vec, alpha = found
        return Diagnostics(
            (
                Issue(
                    "gamma1",
                    f"Lattice is not contained in Gamma_1: 2*alpha(v) is not an integer for alpha = "
                    f"({', '.join(witness_strings(alpha))})",
                    witness_strings(vec),
                ),
            )
        )
    return Diagnostics()


def make_standard(datum_type: DatumType) -> EuclideanRootDatum:
    """Cubic datum of the given type: ``gram = L^2 I``, lattice ``Z^r``, roots in epsilon coordinates."""
    r = datum_type.rank
    lattice = Lattice.standard(r, datum_type.length_sq)
    roots = RootSystem(r, lattice.gram, tuple(standard_roots(datum_type.type_tag, r)))
    return EuclideanRootDatum(lattice.gram, lattice, roots)


def fundamental_group(datum: EuclideanRootDatum) -> AbelianGroupStructure:
    return quotient_group(datum.lattice, gamma0(datum.roots))


def classify(datum: EuclideanRootDatum, max_rank: int = DEFAULT_MAX_RANK) -> ClassificationReport:
    diagnostics = validate(datum)
    if not diagnostics.ok:
        raise ClassificationError(f"Datum is not valid: {diagnostics.issues[0].message}")

    basis = orthogonal_basis(datum.lattice, max_rank)
    if basis is None:
        raise NotRectangularError("Lattice has no orthogonal basis")

    factors = split(datum)
    if len(factors) > 1:
        raise DecomposableError(factors)

    if not basis.is_cubic:
        raise NotCubicError(
            "Orthogonal basis vectors have different lengths: "
            + ", ".join(str(x) for x in basis.squared_lengths)
        )

    signs = normalize_signs(datum.roots, basis)
    tag = classify_family(datum.roots, basis, signs)
    datum_type = DatumType(tag.family, tag.rank_parameter, basis.common_length_sq)
    pi1 = fundamental_group(datum)
    logger.info("classified datum as %s with pi1 %s", datum_type.label, pi1.label)
    return ClassificationReport(
        datum_type=datum_type,
        cubic_basis=basis,
        sign_vector=signs,
        fundamental_group=pi1,
        case=datum_type.case,
    )


def split(datum: EuclideanRootDatum, max_rank: int = DEFAULT_MAX_RANK) -> list[EuclideanRootDatum]:
    """Finest decomposition of the datum into an orthogonal product.

    Blocks are the spans of the irreducible root components plus axes of the common kernel.
    A union of blocks splits off iff the lattice is the sum of its intersections with the
    union and its complement; such unions are closed under intersection, so the finest
    partition is read off from the smallest splitting union containing each block.
    """
    components = irreducible_components(datum.roots)
    blocks: list[list[QVector]] = [list(c.span) for c in components.components]
    block_roots: list[tuple[QVector, ...]] = [c.roots for c in components.components]
    if components.kernel:
        for axis in _kernel_axes(datum, list(components.kernel), max_rank):
            blocks.append(axis)
            block_roots.append(())

    n = len(blocks)
    if n <= 1:
        return [datum]

    everything = frozenset(range(n))
    splitting: list[frozenset[int]] = [everything]
    for size in range(1, n):
        for subset in itertools.combinations(range(n), size):
            chosen = frozenset(subset)
            inside = [v for i in sorted(chosen) for v in blocks[i]]
            outside = [v for i in sorted(everything - chosen) for v in blocks[i]]
            if splits_across(datum.lattice, [inside, outside]):
                splitting.append(chosen)

    groups: list[frozenset[int]] = []
    for i in range(n):
        atom = everything
        for s in splitting:
            if i in s:
                atom = atom & s
        if atom not in groups:
            groups.append(atom)
    logger.debug("split: %d blocks, %d splitting unions, groups %s", n, len(splitting), groups)

    if len(groups) == 1:
        return [datum]
    groups.sort(key=min)
    return [
        _sub_datum(
            datum,
            [v for i in sorted(g) for v in blocks[i]],
            [a for i in sorted(g) for a in block_roots[i]],
        )
        for g in groups
    ]


def admits_polysphere(datum: EuclideanRootDatum, max_rank: int = DEFAULT_MAX_RANK) -> bool:
    if orthogonal_basis(datum.lattice, max_rank) is None:
        return False
    return fundamental_group(datum).is_trivial


def is_isomorphic(
    first: EuclideanRootDatum, second: EuclideanRootDatum, max_rank: int = MAX_ISOMORPHISM_RANK
) -> QMatrix | None:
    """Linear isometry ``phi`` with ``phi(Gamma) = Gamma'`` and ``phi(R) = R'``, or ``None``.

    ``phi`` maps the first lattice basis to length-matched vectors of the second lattice;
    candidates are tried in enumeration order, so the witness is deterministic.
    """
    n = first.dim
    if n > max_rank:
        raise RankTooLargeError(n, max_rank)
    if second.dim != n or len(first.roots) != len(second.roots):
        return None
    if first.lattice.covolume_sq != second.lattice.covolume_sq:
        return None
    if fundamental_group(first) != fundamental_group(second):
        return None

    q = first.lattice.coefficient_gram
    by_length: dict[Fraction, list[QVector]] = {}
    bound = max(q.entries[i][i] for i in range(n))
    for v in vectors_within(second.lattice, bound, max_rank):
        by_length.setdefault(norm_sq(second.gram, v), []).append(v)
    candidates = [by_length.get(q.entries[i][i], []) for i in range(n)]
    if any(not c for c in candidates):
        return None

    first_basis = first.lattice.basis
    target_roots = set(second.roots.roots)
    images: list[QVector] = []

    def search(i: int) -> QMatrix | None:
        if i == n:
            image = QMatrix.from_columns(images, dim=n)
            # phi^-1 = B1 C^-1; a root alpha of the first datum maps to alpha o phi^-1.
            phi_inv = first_basis @ image.inverse()
            if {phi_inv.apply_covector(a) for a in first.roots.roots} != target_roots:
                return None
            return image @ first_basis.inverse()
        for v in candidates[i]:
            if all(inner(second.gram, v, images[j]) == q.entries[i][j] for j in range(i)):
                images.append(v)
                found = search(i + 1)
                if found is not None:
                    return found
                images.pop()
        return None

    return search(0)


def covering_family(roots: RootSystem) -> list[EuclideanRootDatum]:
    """All data ``(V, Gamma, R)`` with ``Gamma_0 <= Gamma <= Gamma_1``, ordered by ``[Gamma : Gamma_0]``."""
    diagnostics = validate_root_system(roots)
    if not diagnostics.ok:
        raise RootSystemError(f"Not a root system: {diagnostics.issues[0].message}")
    n = roots.ambient_dim
    g0 = gamma0(roots)
    g1 = gamma1(roots)
    quotient = quotient_group(g1, g0)
    elements = _coset_representatives(g1, g0)
    generators = max(1, len(quotient.invariant_factors))

    found: dict[tuple[QVector, ...], EuclideanRootDatum] = {}
    for picks in itertools.product(elements, repeat=generators):
        basis = tuple(lattice_basis(g0.vectors() + list(picks), n))
        if basis not in found:
            lattice = Lattice.from_vectors(list(basis), roots.gram)
            found[basis] = EuclideanRootDatum(roots.gram, lattice, roots)

    def index(d: EuclideanRootDatum) -> int:
        order = quotient_group(d.lattice, g0).order
        return order if order is not None else 0

    family = sorted(
        found.values(),
        key=lambda d: (index(d), tuple(tuple(-x for x in v) for v in d.lattice.vectors())),
    )
    logger.debug("covering family: %d lattices between Gamma_0 and Gamma_1", len(family))
    return family


def _coset_representatives(outer: Lattice, sub: Lattice) -> list[QVector]:
    """One vector per coset of ``sub`` in ``outer`` (both full rank)."""
    coords = [outer.basis.inverse().apply(v) for v in sub.vectors()]
    snf = smith_normal_form(QMatrix.from_columns(coords, dim=outer.rank))
    # U M V = D, so Z^n / M Z^n is generated by the columns of U^-1 with orders D_ii.
    u_inv = snf.U.inverse()
    ranges = [range(d) for d in snf.diagonal]
    reps: list[QVector] = []
    for combo in itertools.product(*ranges):
        coeff = u_inv.apply(tuple(Fraction(c) for c in combo))
        reps.append(outer.basis.apply(coeff))
    return reps


def _kernel_axes(datum: EuclideanRootDatum, kernel: list[QVector], max_rank: int) -> list[list[QVector]]:
    kernel_lattice = intersect_subspace(datum.lattice, kernel)
    axes = orthogonal_basis(kernel_lattice, max_rank)
    if axes is None:
        return [kernel]
    return [[v] for v in axes.vectors]


def _sub_datum(
    datum: EuclideanRootDatum, span: Sequence[QVector], roots: Sequence[QVector]
) -> EuclideanRootDatum:
    piece = intersect_subspace(datum.lattice, list(span))
    basis = piece.basis
    gram = piece.coefficient_gram
    k = piece.rank
    lattice = Lattice(k, QMatrix.identity(k), gram)
    restricted = tuple(basis.apply_covector(alpha) for alpha in roots)
    return EuclideanRootDatum(gram, lattice, RootSystem(k, gram, restricted))
