"""Root systems stored as exact covectors, their Weyl groups and the lattices they define.

A root ``alpha`` is a row of ambient covector coordinates; ``H_alpha = G^-1 alpha^T`` and the
coroot is ``2 H_alpha / |H_alpha|^2``. Relative to an orthogonal lattice basis ``e_1..e_r`` the
epsilon coordinates of ``alpha`` are ``(alpha(e_1), ..., alpha(e_r))``.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import (
    LinalgError,
    NotCubicError,
    PatternError,
    RootSystemError,
    ShapeError,
    WeylClosureError,
)
from .exact_linalg import (
    QMatrix,
    QVector,
    common_denominator,
    dot,
    format_rational,
    lattice_basis,
    neg,
    nullspace,
    scale,
    sub,
)
from .lattice import dual_lattice
from .model import (
    Diagnostics,
    Family,
    FamilyTag,
    Issue,
    Lattice,
    OrthogonalBasis,
    RootSystem,
    WeylGroup,
    witness_strings,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_WEYL = 10_000

_FAMILY_ORDER = (Family.A, Family.B, Family.C, Family.D, Family.BC)


class RootKind(str, Enum):
    SHORT = "m1"
    LONG = "m2"
    SUM = "m_plus"
    DIFFERENCE = "m_minus"


@dataclass(frozen=True)
class PositiveRoot:
    root: QVector
    epsilon: QVector
    kind: RootKind


@dataclass(frozen=True)
class RootComponent:
    roots: tuple[QVector, ...]
    span: tuple[QVector, ...]


@dataclass(frozen=True)
class RootComponents:
    components: tuple[RootComponent, ...]
    kernel: tuple[QVector, ...]


def h_vector(roots: RootSystem, alpha: QVector) -> QVector:
    return roots.dual_gram.apply(alpha)


def coroot(roots: RootSystem, alpha: QVector) -> QVector:
    if alpha not in roots:
        raise RootSystemError(f"{_fmt(alpha)} is not a root")
    return _coroot(roots, alpha)


def _coroot(roots: RootSystem, alpha: QVector) -> QVector:
    h = h_vector(roots, alpha)
    return scale(2 / dot(alpha, h), h)


def reflection(roots: RootSystem, alpha: QVector) -> QMatrix:
    """Matrix of ``s_alpha(H) = H - alpha(H) alpha_check``."""
    if alpha not in roots:
        raise RootSystemError(f"{_fmt(alpha)} is not a root")
    check = _coroot(roots, alpha)
    n = roots.ambient_dim
    return QMatrix(
        tuple(
            tuple(Fraction(int(i == j)) - check[i] * alpha[j] for j in range(n))
            for i in range(n)
        )
    )


def reflect_covector(beta: QVector, alpha: QVector, alpha_check: QVector) -> QVector:
    return sub(beta, scale(dot(beta, alpha_check), alpha))


def validate_root_system(roots: RootSystem) -> Diagnostics:
    """Checks negation closure, integrality ``beta(alpha_check)``, then reflection closure."""
    checks = {alpha: _coroot(roots, alpha) for alpha in roots.roots}
    for alpha in roots.roots:
        if neg(alpha) not in roots:
            return _failed("negation", f"{_fmt(alpha)} has no negative in the set", alpha)
    for alpha in roots.roots:
        for beta in roots.roots:
            pairing = dot(beta, checks[alpha])
            if pairing.denominator != 1:
                return _failed(
                    "integrality",
                    f"{_fmt(beta)} evaluated on the coroot of {_fmt(alpha)} is {format_rational(pairing)}",
                    beta,
                )
    for alpha in roots.roots:
        for beta in roots.roots:
            image = reflect_covector(beta, alpha, checks[alpha])
            if image not in roots:
                return _failed(
                    "reflection",
                    f"reflecting {_fmt(beta)} in {_fmt(alpha)} gives {_fmt(image)}, not a root",
                    image,
                )
    return Diagnostics()


def distinct_reflections(roots: RootSystem) -> list[QMatrix]:
    seen: set[QMatrix] = set()
    ordered: list[QMatrix] = []
    for alpha in roots.roots:
        s = reflection(roots, alpha)
        if s not in seen:
            seen.add(s)
            ordered.append(s)
    return ordered


def weyl_group(roots: RootSystem, max_elements: int = DEFAULT_MAX_WEYL) -> WeylGroup:
    """Breadth-first closure over the reflections, in integer coordinates.

    The coroot lattice plus a basis of the common kernel gives coordinates in which every
    Weyl group element is an integer matrix; products are taken there and converted back.
    """
    n = roots.ambient_dim
    generators = distinct_reflections(roots)
    identity = QMatrix.identity(n)
    if not generators:
        return WeylGroup(n, (identity,), ())

    coroot_basis = lattice_basis([_coroot(roots, a) for a in roots.roots], n)
    kernel = nullspace(QMatrix(roots.roots)) if roots.roots else []
    change = QMatrix.from_columns(coroot_basis + kernel, dim=n)
    try:
        change_inv = change.inverse()
    except LinalgError as exc:
        raise RootSystemError("Coroots and common kernel do not span the space") from exc

    int_gens: list[np.ndarray] = []
    for s in generators:
        local = change_inv @ s @ change
        if not local.is_integer():
            raise RootSystemError(
                "Reflections do not preserve the coroot lattice; set is not crystallographic"
            )
        int_gens.append(np.array([[int(x) for x in row] for row in local.entries], dtype=np.int64))

    start = np.eye(n, dtype=np.int64)
    seen: dict[bytes, int] = {start.tobytes(): 0}
    elements: list[np.ndarray] = [start]
    queue: deque[np.ndarray] = deque([start])
    while queue:
        current = queue.popleft()
        for gen in int_gens:
            product = current @ gen
            key = product.tobytes()
            if key in seen:
                continue
            if len(elements) >= max_elements:
                raise WeylClosureError(max_elements)
            seen[key] = len(elements)
            elements.append(product)
            queue.append(product)
    logger.debug("weyl closure: %d elements from %d reflections", len(elements), len(int_gens))

    p_den = common_denominator(x for row in change.entries for x in row)
    q_den = common_denominator(x for row in change_inv.entries for x in row)
    p_int = np.array([[int(x * p_den) for x in row] for row in change.entries], dtype=object)
    q_int = np.array([[int(x * q_den) for x in row] for row in change_inv.entries], dtype=object)
    den = p_den * q_den
    ambient = tuple(_exact(p_int @ w.astype(object) @ q_int, den) for w in elements)
    return WeylGroup(n, ambient, tuple(generators))


def weyl_orbit(group: WeylGroup, v: Sequence[Fraction]) -> list[QVector]:
    if len(v) != group.ambient_dim:
        raise RootSystemError(
            f"Vector of length {len(v)} for a group acting in dimension {group.ambient_dim}"
        )
    orbit = {w.apply(v) for w in group.elements}
    return sorted(orbit, key=lambda x: tuple(-c for c in x))


def orbit_case(group: WeylGroup, basis: OrthogonalBasis) -> str:
    """``"I"`` when the orbit of ``e_1`` contains ``-e_1`` (transitive on ``±e_j``), else ``"II"``."""
    if not basis.vectors:
        return "II"
    first = basis.vectors[0]
    return "I" if neg(first) in set(weyl_orbit(group, first)) else "II"


def coroot_system(roots: RootSystem) -> RootSystem:
    """The inverse roots, as a root system whose covector form is the original gram."""
    return RootSystem(roots.ambient_dim, roots.dual_gram, tuple(_coroot(roots, a) for a in roots.roots))


def gamma0(roots: RootSystem) -> Lattice:
    """Z-span of the half-coroots."""
    halves = [scale(Fraction(1, 2), _coroot(roots, a)) for a in roots.roots]
    return Lattice.from_vectors(lattice_basis(halves, roots.ambient_dim), roots.gram)


def gamma1_witness(roots: RootSystem, lattice: Lattice) -> tuple[QVector, QVector] | None:
    """First lattice basis vector ``g`` and root ``alpha`` with ``2 alpha(g)`` not an integer."""
    if lattice.ambient_dim != roots.ambient_dim:
        raise RootSystemError("Lattice and roots live in different dimensions")
    for g in lattice.vectors():
        for alpha in roots.roots:
            if (2 * dot(alpha, g)).denominator != 1:
                return g, alpha
    return None


def gamma1_contains(roots: RootSystem, lattice: Lattice) -> bool:
    return gamma1_witness(roots, lattice) is None


def gamma1(roots: RootSystem) -> Lattice:
    """Gamma_1 as a lattice; only discrete when the roots span the dual space."""
    n = roots.ambient_dim
    root_lattice = lattice_basis(list(roots.roots), n)
    if len(root_lattice) != n:
        raise RootSystemError("Gamma_1 is not discrete: the roots do not span the dual space")
    integral = dual_lattice(Lattice.from_vectors(root_lattice, roots.dual_gram))
    return Lattice.from_vectors([scale(Fraction(1, 2), v) for v in integral.vectors()], roots.gram)


def epsilon_coordinates(alpha: QVector, basis: Sequence[QVector]) -> QVector:
    return tuple(dot(alpha, e) for e in basis)


def normalize_signs(roots: RootSystem, basis: OrthogonalBasis) -> tuple[int, ...]:
    """Signs ``l_j`` with ``l_i eps_i - l_j eps_j`` in ``2R`` for all ``i < j``.

    Indices are adjoined in ascending order; only the new index is ever flipped.
    """
    r = len(basis.vectors)
    doubled = _doubled(roots, basis.vectors)
    signs = [1] * r
    for m in range(1, r):
        for ell in range(m):
            if _difference(r, ell, signs[ell], m, 1) in doubled:
                signs[m] = 1
                break
            if _difference(r, ell, signs[ell], m, -1) in doubled:
                signs[m] = -1
                break
        else:
            raise RootSystemError(f"No sign choice links eps_{m + 1} to the earlier basis vectors")
    for i in range(r):
        for j in range(i + 1, r):
            if _difference(r, i, signs[i], j, signs[j]) not in doubled:
                raise RootSystemError(f"eps_{i + 1} - eps_{j + 1} is not in 2R after normalizing signs")
    return tuple(signs)


def standard_roots(family: Family, r: int) -> list[QVector]:
    """The roots of the given family in epsilon coordinates (halves of the classical sets)."""
    half = Fraction(1, 2)
    found: set[QVector] = set()

    def put(coords: dict[int, Fraction]) -> None:
        found.add(tuple(coords.get(i, Fraction(0)) for i in range(r)))

    for j in range(r):
        if family in (Family.B, Family.BC):
            put({j: half})
            put({j: -half})
        if family in (Family.C, Family.BC):
            put({j: Fraction(1)})
            put({j: Fraction(-1)})
        for k in range(r):
            if k == j:
                continue
            if family is Family.A:
                put({j: half, k: -half})
            elif k > j:
                for sj in (1, -1):
                    for sk in (1, -1):
                        put({j: sj * half, k: sk * half})
    return sorted(found)


def check_possible_roots(
    roots: RootSystem, basis: OrthogonalBasis, signs: Sequence[int] | None = None
) -> Diagnostics:
    """Every ``2 alpha`` must be one of ``±eps_j, ±2eps_j, ±eps_j±eps_k``."""
    vectors = _signed(basis.vectors, signs)
    for alpha in roots.roots:
        doubled = scale(2, epsilon_coordinates(alpha, vectors))
        if not _has_shape(doubled):
            return _failed("shape", f"2*{_fmt(alpha)} has epsilon coordinates {_fmt(doubled)}", alpha)
    return Diagnostics()


def classify_family(
    roots: RootSystem, basis: OrthogonalBasis, signs: Sequence[int] | None = None
) -> FamilyTag:
    r = len(basis.vectors)
    if r != roots.ambient_dim:
        raise RootSystemError("Basis size does not match the ambient dimension")
    if not basis.is_cubic:
        raise NotCubicError("Family classification needs a cubic basis")
    if signs is None:
        signs = normalize_signs(roots, basis)
    shape = check_possible_roots(roots, basis, signs)
    if not shape.ok:
        issue = shape.issues[0]
        raise ShapeError(issue.message, issue.witness)
    vectors = _signed(basis.vectors, signs)
    present = {epsilon_coordinates(alpha, vectors) for alpha in roots.roots}
    for family in _FAMILY_ORDER:
        if family is Family.D and r < 2:
            continue
        if present == set(standard_roots(family, r)):
            return FamilyTag(family, r)
    raise PatternError("Roots match none of the families A, B, C, D, BC relative to this basis")


def positive_roots(roots: RootSystem, basis: OrthogonalBasis) -> list[PositiveRoot]:
    """Roots whose doubled epsilon form is ``eps_j, 2eps_j, eps_j+eps_k`` or ``eps_j-eps_k`` (``j<k``)."""
    signs = normalize_signs(roots, basis)
    classify_family(roots, basis, signs)
    vectors = _signed(basis.vectors, signs)
    positive: list[PositiveRoot] = []
    for alpha in roots.roots:
        eps = epsilon_coordinates(alpha, vectors)
        nonzero = [x for x in eps if x != 0]
        if nonzero[0] < 0:
            continue
        if len(nonzero) == 1:
            kind = RootKind.SHORT if 2 * nonzero[0] == 1 else RootKind.LONG
        else:
            kind = RootKind.SUM if nonzero[1] > 0 else RootKind.DIFFERENCE
        positive.append(PositiveRoot(alpha, eps, kind))
    positive.sort(key=lambda p: tuple(-x for x in p.epsilon))
    return positive


def irreducible_components(roots: RootSystem) -> RootComponents:
    n = roots.ambient_dim
    items = list(roots.roots)
    hs = [h_vector(roots, a) for a in items]
    parent = list(range(len(items)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if dot(items[i], hs[j]) != 0:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)

    groups: dict[int, list[QVector]] = {}
    for i, alpha in enumerate(items):
        groups.setdefault(find(i), []).append(alpha)
    components = tuple(
        RootComponent(
            roots=tuple(members),
            span=tuple(lattice_basis([_coroot(roots, a) for a in members], n)),
        )
        for _, members in sorted(groups.items())
    )
    if items:
        kernel = tuple(lattice_basis(nullspace(QMatrix(tuple(items))), n))
    else:
        kernel = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    return RootComponents(components, kernel)


def _exact(matrix: np.ndarray, den: int) -> QMatrix:
    return QMatrix(tuple(tuple(Fraction(int(x), den) for x in row) for row in matrix))


def _doubled(roots: RootSystem, basis: Sequence[QVector]) -> set[QVector]:
    return {scale(2, epsilon_coordinates(alpha, basis)) for alpha in roots.roots}


def _difference(r: int, i: int, si: int, j: int, sj: int) -> QVector:
    coords = [Fraction(0)] * r
    coords[i] = Fraction(si)
    coords[j] = Fraction(-sj)
    return tuple(coords)


def _signed(vectors: Sequence[QVector], signs: Sequence[int] | None) -> list[QVector]:
    if signs is None:
        return list(vectors)
    return [scale(s, v) for s, v in zip(signs, vectors)]


def _has_shape(doubled: QVector) -> bool:
    if any(x.denominator != 1 for x in doubled):
        return False
    nonzero = [abs(x) for x in doubled if x != 0]
    if len(nonzero) == 1:
        return nonzero[0] in (1, 2)
    return len(nonzero) == 2 and nonzero == [1, 1]


def _failed(path: str, message: str, witness: QVector) -> Diagnostics:
    return Diagnostics((Issue(path=path, message=message, witness=witness_strings(witness)),))


def _fmt(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(x) for x in v) + ")"
