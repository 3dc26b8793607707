import itertools
from fractions import Fraction

import pytest

from root_datum_toolkit.datum.errors import MultiplicityError, SpectrumError
from root_datum_toolkit.datum.lattice import orthogonal_basis
from root_datum_toolkit.datum.model import DatumType, Family
from root_datum_toolkit.datum.rootdatum import make_standard
from root_datum_toolkit.datum.spectrum import (
    MultiplicitySet,
    dominant_representative,
    eigenvalue,
    enumerate_spectrum,
    first_eigenspace_check,
    first_eigenspace_index,
    is_dominant,
    to_absolute,
    two_rho,
    two_rho_from_roots,
)

F = Fraction

C2 = DatumType(Family.C, 2)
A1 = DatumType(Family.A, 2)
D2 = DatumType(Family.D, 2)


def _values(datum_type, m, bound):
    return [(w.k, ev.value) for w, ev in enumerate_spectrum(datum_type, m, F(bound))]


def _consistent_multiplicities(datum_type):
    """Every multiplicity set with entries in 1..4 on the root shapes present."""
    family, r = datum_type.type_tag, datum_type.rank
    values = range(1, 5)
    short = values if family in (Family.B, Family.BC) else [0]
    long = values if family in (Family.C, Family.BC) else [0]
    if r == 1:
        pairs = [(0, 0)]
    elif family is Family.A:
        pairs = [(0, m) for m in values]
    elif family is Family.D and r == 2:
        pairs = list(itertools.product(values, repeat=2))
    else:
        pairs = [(m, m) for m in values]
    for m1, m2, (plus, minus) in itertools.product(short, long, pairs):
        yield MultiplicitySet(m1, m2, plus, minus)


# --- Multiplicity Tests ---


def test_parse_multiplicities():
    assert MultiplicitySet.parse("0, 1,1,1") == MultiplicitySet(0, 1, 1, 1)


@pytest.mark.parametrize("text", ["1,2,3", "a,b,c,d", "1,2,3,-1"])
def test_parse_multiplicities_rejects(text):
    with pytest.raises(MultiplicityError):
        MultiplicitySet.parse(text)


def test_multiplicities_must_match_root_shapes():
    with pytest.raises(MultiplicityError):
        two_rho(C2, MultiplicitySet(1, 1, 1, 1))
    with pytest.raises(MultiplicityError):
        two_rho(C2, MultiplicitySet(0, 0, 1, 1))
    with pytest.raises(MultiplicityError):
        two_rho(DatumType(Family.B, 3), MultiplicitySet(1, 0, 1, 2))


def test_d2_allows_unequal_sum_and_difference():
    assert two_rho(D2, MultiplicitySet(0, 0, 5, 1)) == (3, 2)


# --- Two Rho Tests ---


def test_two_rho_closed_forms():
    assert two_rho(C2, MultiplicitySet(0, 1, 1, 1)) == (2, 1)
    assert two_rho(A1, MultiplicitySet(0, 0, 0, 4)) == (2, -2)
    assert two_rho(DatumType(Family.B, 1), MultiplicitySet(1, 0, 0, 0)) == (F(1, 2),)


@pytest.mark.parametrize(
    "datum_type,m",
    [
        (DatumType(Family.A, 4), MultiplicitySet(0, 0, 0, 3)),
        (DatumType(Family.B, 3), MultiplicitySet(2, 0, 1, 1)),
        (DatumType(Family.C, 3), MultiplicitySet(0, 1, 2, 2)),
        (DatumType(Family.D, 3), MultiplicitySet(0, 0, 4, 4)),
        (DatumType(Family.BC, 2), MultiplicitySet(3, 1, 2, 2)),
        (D2, MultiplicitySet(0, 0, 5, 1)),
    ],
)
def test_two_rho_matches_positive_root_sum(datum_type, m):
    datum = make_standard(datum_type)
    basis = orthogonal_basis(datum.lattice)
    assert two_rho_from_roots(datum.roots, basis, m) == two_rho(datum_type, m)


# --- Dominance Tests ---


def test_dominance_conditions():
    assert is_dominant(C2, (2, 0))
    assert not is_dominant(C2, (0, 1))
    assert is_dominant(A1, (0, -1))
    assert is_dominant(DatumType(Family.D, 3), (2, 1, -1))
    assert not is_dominant(DatumType(Family.D, 3), (1, 1, -2))


def test_dominance_rejects_wrong_length():
    with pytest.raises(SpectrumError):
        is_dominant(C2, (1,))


def test_dominant_representative():
    d3 = DatumType(Family.D, 3)
    assert dominant_representative(d3, (1, -2, 0)) == (2, 1, 0)
    assert dominant_representative(d3, (-1, 2, 3)) == (3, 2, -1)
    assert dominant_representative(C2, (-1, 3)) == (3, 1)
    assert dominant_representative(A1, (-2, 5)) == (5, -2)


# --- Eigenvalue Tests ---


def test_eigenvalues_of_c2():
    m = MultiplicitySet(0, 1, 1, 1)
    assert eigenvalue(C2, m, (1, 0)).value == 3
    assert eigenvalue(C2, m, (1, 1)).value == 5
    assert eigenvalue(C2, m, (2, 0)).value == 8


def test_eigenvalue_of_c3_first_weight():
    assert eigenvalue(DatumType(Family.C, 3), MultiplicitySet(0, 1, 2, 2), (1, 0, 0)).value == 6


def test_eigenvalue_independent_of_side_length():
    m = MultiplicitySet(0, 1, 1, 1)
    scaled = DatumType(Family.C, 2, 4)
    assert eigenvalue(scaled, m, (1, 1)) == eigenvalue(C2, m, (1, 1))


def test_non_dominant_weight_rejected():
    with pytest.raises(SpectrumError):
        eigenvalue(C2, MultiplicitySet(0, 1, 1, 1), (0, 1))


def test_to_absolute_scales_by_side_length():
    assert to_absolute(F(3), F(1)) == pytest.approx(12 * 3.141592653589793**2)
    assert to_absolute(F(3), F(4)) == pytest.approx(3 * 3.141592653589793**2)


# --- Enumeration Tests ---


def test_spectrum_of_c2_up_to_six():
    assert _values(C2, MultiplicitySet(0, 1, 1, 1), 6) == [((0, 0), 0), ((1, 0), 3), ((1, 1), 5)]


def test_spectrum_of_b1():
    assert _values(DatumType(Family.B, 1), MultiplicitySet(1, 0, 0, 0), 4) == [((0,), 0), ((1,), F(3, 2))]


def test_spectrum_of_a1_includes_negative_weights():
    assert _values(A1, MultiplicitySet(0, 0, 0, 2), 2) == [
        ((0, 0), 0),
        ((-1, -1), 2),
        ((0, -1), 2),
        ((1, 0), 2),
        ((1, 1), 2),
    ]


def test_spectrum_negative_bound_is_empty():
    assert _values(C2, MultiplicitySet(0, 1, 1, 1), -1) == []


def test_spectrum_is_sorted_and_bounded():
    m = MultiplicitySet(2, 0, 1, 1)
    b3 = DatumType(Family.B, 3)
    entries = enumerate_spectrum(b3, m, F(20))
    values = [ev.value for _, ev in entries]
    assert values == sorted(values)
    assert all(v <= 20 for v in values)
    assert all(is_dominant(b3, w.k) for w, _ in entries)


# --- First Eigenspace Tests ---


def test_first_eigenspace_holds_for_c_family():
    assert first_eigenspace_check(C2, MultiplicitySet(0, 1, 1, 1))
    assert first_eigenspace_index(C2, MultiplicitySet(0, 1, 1, 1)) == 1


def test_first_eigenspace_fails_for_a1_with_large_multiplicity():
    m = MultiplicitySet(0, 0, 0, 4)
    assert eigenvalue(A1, m, (1, 1)).value == 2
    assert eigenvalue(A1, m, (1, 0)).value == 3
    assert first_eigenspace_index(A1, m) == 2
    assert not first_eigenspace_check(A1, m)


def test_first_eigenspace_fails_for_unbalanced_d2():
    m = MultiplicitySet(0, 0, 5, 1)
    assert eigenvalue(D2, m, (1, 0)).value == 4
    assert eigenvalue(D2, m, (1, -1)).value == 3
    assert not first_eigenspace_check(D2, m)
    # swapping m_plus and m_minus is a change of sign of eps_2
    assert first_eigenspace_index(D2, MultiplicitySet(0, 0, 1, 5)) == first_eigenspace_index(D2, m)


@pytest.mark.parametrize("m_minus", [1, 2, 3, 4])
@pytest.mark.parametrize("rank", [2, 3, 4, 5])
def test_first_eigenspace_grid_type_a(rank, m_minus):
    assert first_eigenspace_check(DatumType(Family.A, rank), MultiplicitySet(0, 0, 0, m_minus)) is (
        m_minus <= 2
    )


@pytest.mark.parametrize("m_minus", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("m_plus", [1, 2, 3, 4, 5])
def test_first_eigenspace_grid_d2(m_plus, m_minus):
    assert first_eigenspace_check(D2, MultiplicitySet(0, 0, m_plus, m_minus)) is (
        abs(m_plus - m_minus) <= 2
    )


@pytest.mark.parametrize(
    "datum_type,m",
    [
        (DatumType(Family.B, 2), MultiplicitySet(1, 0, 3, 3)),
        (DatumType(Family.C, 3), MultiplicitySet(0, 4, 1, 1)),
        (DatumType(Family.D, 4), MultiplicitySet(0, 0, 2, 2)),
        (DatumType(Family.BC, 2), MultiplicitySet(5, 2, 1, 1)),
        (DatumType(Family.A, 1), MultiplicitySet()),
    ],
)
def test_first_eigenspace_holds_outside_exceptions(datum_type, m):
    assert first_eigenspace_check(datum_type, m)


# --- Closed Form Oracle Tests ---


@pytest.mark.parametrize("family", list(Family))
def test_closed_form_matches_inner_product_grid(family):
    checked = 0
    low = 2 if family is Family.D else 1
    for rank in range(low, 6):
        datum_type = DatumType(family, rank)
        weights = [
            k
            for k in itertools.product(range(-3, 4), repeat=rank)
            if sum(x * x for x in k) <= 9 and is_dominant(datum_type, k)
        ]
        for m in _consistent_multiplicities(datum_type):
            for k in weights:
                # raises if the closed form and <omega + 2 rho, omega> disagree
                assert eigenvalue(datum_type, m, k).value >= 0
                checked += 1
    assert checked > 100
