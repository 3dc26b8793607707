"""Laplacian eigenvalues on spherical representations, exact in units of ``4 pi^2 / L^2``.

For ``omega = sum k_j eps_j`` the scaled eigenvalue is ``L^2 <omega + 2 rho, omega>``; with the
cubic gram ``|eps_j|^2 = 1 / L^2`` this is ``sum k_j (k_j + c_j)`` where ``c = 2 rho``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import MultiplicityError, SpectrumError
from .exact_linalg import QMatrix, QVector, inner
from .model import DatumType, Family, OrthogonalBasis, RootSystem
from .rootsystem import RootKind, positive_roots

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MultiplicitySet:
    m1: int = 0
    m2: int = 0
    m_plus: int = 0
    m_minus: int = 0

    def __post_init__(self) -> None:
        for name in ("m1", "m2", "m_plus", "m_minus"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise MultiplicityError(f"{name} must be a nonnegative integer, got {value!r}")

    @classmethod
    def parse(cls, text: str) -> MultiplicitySet:
        """Parse ``"m1,m2,m+,m-"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise MultiplicityError(f"Expected four comma-separated multiplicities, got {text!r}")
        try:
            values = [int(p) for p in parts]
        except ValueError as exc:
            raise MultiplicityError(f"Multiplicities must be integers: {text!r}") from exc
        return cls(*values)

    def of_kind(self, kind: RootKind) -> int:
        return {
            RootKind.SHORT: self.m1,
            RootKind.LONG: self.m2,
            RootKind.SUM: self.m_plus,
            RootKind.DIFFERENCE: self.m_minus,
        }[kind]


@dataclass(frozen=True)
class DominantWeight:
    k: tuple[int, ...]


@dataclass(frozen=True)
class ScaledEigenvalue:
    value: Fraction

    def __post_init__(self) -> None:
        if self.value < 0:
            raise SpectrumError(f"Scaled eigenvalue {self.value} is negative")


def check_multiplicities(datum_type: DatumType, m: MultiplicitySet) -> None:
    """Positive exactly on the root shapes present for the type."""
    family, r = datum_type.type_tag, datum_type.rank
    short = family in (Family.B, Family.BC)
    long = family in (Family.C, Family.BC)
    pairs = r >= 2
    sums = pairs and family is not Family.A
    _require(m.m1 > 0 if short else m.m1 == 0, "m1", datum_type)
    _require(m.m2 > 0 if long else m.m2 == 0, "m2", datum_type)
    _require(m.m_plus > 0 if sums else m.m_plus == 0, "m_plus", datum_type)
    _require(m.m_minus > 0 if pairs else m.m_minus == 0, "m_minus", datum_type)
    lattice_coupled = family is Family.D and r == 2
    if sums and not lattice_coupled and m.m_plus != m.m_minus:
        raise MultiplicityError(f"m_plus and m_minus must agree for {datum_type.label}")


def two_rho(datum_type: DatumType, m: MultiplicitySet) -> QVector:
    """Epsilon coordinates of ``2 rho``."""
    check_multiplicities(datum_type, m)
    family, r = datum_type.type_tag, datum_type.rank
    if family is Family.A:
        return tuple(Fraction(m.m_minus, 2) * (r - 2 * j + 1) for j in range(1, r + 1))
    if family is Family.D and r == 2:
        return (Fraction(m.m_plus + m.m_minus, 2), Fraction(m.m_plus - m.m_minus, 2))
    return tuple(Fraction(m.m1, 2) + m.m2 + m.m_plus * (r - j) for j in range(1, r + 1))


def two_rho_from_roots(roots: RootSystem, basis: OrthogonalBasis, m: MultiplicitySet) -> QVector:
    """``sum m_alpha alpha`` over positive roots, in epsilon coordinates."""
    total = [Fraction(0)] * len(basis.vectors)
    for root in positive_roots(roots, basis):
        weight = m.of_kind(root.kind)
        for j, x in enumerate(root.epsilon):
            total[j] += weight * x
    return tuple(total)


def is_dominant(datum_type: DatumType, k: Sequence[int]) -> bool:
    r = datum_type.rank
    if len(k) != r:
        raise SpectrumError(f"Weight has {len(k)} coordinates, rank is {r}")
    family = datum_type.type_tag
    chain = all(k[j] >= k[j + 1] for j in range(r - 1))
    if family is Family.A:
        return chain
    if family is Family.D:
        return all(k[j] >= k[j + 1] for j in range(r - 2)) and k[r - 2] >= abs(k[r - 1])
    return chain and k[r - 1] >= 0


def dominant_representative(datum_type: DatumType, k: Sequence[int]) -> tuple[int, ...]:
    """Dominant member of the Weyl orbit of ``k``."""
    family = datum_type.type_tag
    if family is Family.A:
        return tuple(sorted(k, reverse=True))
    magnitudes = sorted((abs(x) for x in k), reverse=True)
    if family is Family.D and sum(1 for x in k if x < 0) % 2 and 0 not in k:
        magnitudes[-1] = -magnitudes[-1]
    return tuple(magnitudes)


def eigenvalue(datum_type: DatumType, m: MultiplicitySet, k: Sequence[int]) -> ScaledEigenvalue:
    if not is_dominant(datum_type, k):
        raise SpectrumError(f"{tuple(k)} is not dominant for {datum_type.label}")
    closed = _closed_form(datum_type, m, k)
    general = _general_form(datum_type, m, k)
    if closed != general:
        raise SpectrumError(f"Closed form {closed} disagrees with <omega + 2rho, omega> = {general}")
    return ScaledEigenvalue(closed)


def enumerate_spectrum(
    datum_type: DatumType, m: MultiplicitySet, bound: Fraction
) -> list[tuple[DominantWeight, ScaledEigenvalue]]:
    """Dominant weights with scaled eigenvalue at most ``bound``, by value then ``k``.

    ``sum k_j (k_j + c_j) <= bound`` is the ball ``sum (k_j + c_j/2)^2 <= bound + |c|^2/4``.
    """
    bound = Fraction(bound)
    c = two_rho(datum_type, m)
    r = datum_type.rank
    if bound < 0:
        return []
    radius_sq = bound + sum(x * x for x in c) / 4
    reach = math.isqrt(math.floor(radius_sq)) + 1
    logger.debug("spectrum enumeration: rank %d, radius^2 %s", r, radius_sq)

    found: list[tuple[Fraction, tuple[int, ...]]] = []
    prefix: list[int] = []

    def extend(used: Fraction) -> None:
        j = len(prefix)
        if j == r:
            k = tuple(prefix)
            if is_dominant(datum_type, k):
                value = sum((x * (x + cj) for x, cj in zip(k, c)), Fraction(0))
                if value <= bound:
                    found.append((value, k))
            return
        centre = -c[j] / 2
        for x in range(math.floor(centre) - reach, math.ceil(centre) + reach + 1):
            if prefix and not _chain_allows(datum_type, prefix, x):
                continue
            step = (x - centre) ** 2
            if used + step > radius_sq:
                continue
            prefix.append(x)
            extend(used + step)
            prefix.pop()

    extend(Fraction(0))
    found.sort()
    return [(DominantWeight(k), eigenvalue(datum_type, m, k)) for _, k in found]


def first_eigenspace_check(datum_type: DatumType, m: MultiplicitySet) -> bool:
    """Whether ``eps_1`` attains the smallest positive eigenvalue.

    Fails only for type A (rank >= 2) with ``m_minus > 2`` and for D_2 with
    ``|m_plus - m_minus| > 2``. The closed form is checked against enumeration.
    """
    check_multiplicities(datum_type, m)
    m = _normalized(datum_type, m)
    family, r = datum_type.type_tag, datum_type.rank
    closed = not (
        (family is Family.A and r >= 2 and m.m_minus > 2)
        or (family is Family.D and r == 2 and abs(m.m_plus - m.m_minus) > 2)
    )
    enumerated = first_eigenspace_index(datum_type, m) == 1
    if closed != enumerated:
        raise SpectrumError(f"First-eigenspace closed form and enumeration disagree for {datum_type.label}")
    return closed


def first_eigenspace_index(datum_type: DatumType, m: MultiplicitySet) -> int:
    """Position of ``lambda_eps1`` among the distinct positive eigenvalues, counting from 1."""
    m = _normalized(datum_type, m)
    first = _epsilon_one(datum_type)
    target = eigenvalue(datum_type, m, first).value
    below = {ev.value for _, ev in enumerate_spectrum(datum_type, m, target) if 0 < ev.value < target}
    return len(below) + 1


def to_absolute(value: ScaledEigenvalue | Fraction, length_sq: Fraction) -> float:
    scaled = value.value if isinstance(value, ScaledEigenvalue) else value
    return float(scaled) * 4 * math.pi**2 / float(length_sq)


def _closed_form(datum_type: DatumType, m: MultiplicitySet, k: Sequence[int]) -> Fraction:
    family, r = datum_type.type_tag, datum_type.rank
    if family is Family.A:
        return sum(
            (kj * (kj + Fraction(m.m_minus, 2) * (r - 2 * j + 1)) for j, kj in enumerate(k, start=1)),
            Fraction(0),
        )
    if family is Family.D and r == 2:
        k1, k2 = k
        return k1 * (k1 + Fraction(m.m_plus + m.m_minus, 2)) + k2 * (k2 + Fraction(m.m_plus - m.m_minus, 2))
    return sum(
        (kj * (kj + Fraction(m.m1, 2) + m.m2 + m.m_plus * (r - j)) for j, kj in enumerate(k, start=1)),
        Fraction(0),
    )


def _general_form(datum_type: DatumType, m: MultiplicitySet, k: Sequence[int]) -> Fraction:
    r = datum_type.rank
    length_sq = datum_type.length_sq
    dual = QMatrix.identity(r).scaled(1 / length_sq)
    omega = tuple(Fraction(x) for x in k)
    shifted = tuple(x + y for x, y in zip(omega, two_rho(datum_type, m)))
    return length_sq * inner(dual, shifted, omega)


def _chain_allows(datum_type: DatumType, prefix: Sequence[int], x: int) -> bool:
    family, r = datum_type.type_tag, datum_type.rank
    last = prefix[-1]
    j = len(prefix)
    if family is Family.D and j == r - 1:
        return last >= abs(x)
    return last >= x


def _epsilon_one(datum_type: DatumType) -> tuple[int, ...]:
    return (1,) + (0,) * (datum_type.rank - 1)


def _normalized(datum_type: DatumType, m: MultiplicitySet) -> MultiplicitySet:
    # Replacing eps_2 by -eps_2 swaps the roles of m_plus and m_minus on D_2.
    if datum_type.type_tag is Family.D and datum_type.rank == 2 and m.m_minus > m.m_plus:
        return MultiplicitySet(m.m1, m.m2, m.m_minus, m.m_plus)
    return m


def _require(condition: bool, name: str, datum_type: DatumType) -> None:
    if not condition:
        raise MultiplicityError(f"{name} is inconsistent with the root shapes of {datum_type.label}")
