from fractions import Fraction

import pytest

from root_datum_toolkit.datum.errors import LinalgError
from root_datum_toolkit.datum.exact_linalg import (
    QMatrix,
    format_rational,
    integer_kernel,
    integer_solve,
    lattice_basis,
    norm_sq,
    nullspace,
    parse_rational,
    rank,
    require_gram,
    smith_normal_form,
    vector,
)

F = Fraction

# --- Rational Parsing Tests ---


def test_parse_rational_forms():
    assert parse_rational("3/6") == F(1, 2)
    assert parse_rational(" -4 ") == F(-4)
    assert parse_rational(7) == F(7)


@pytest.mark.parametrize("bad", ["1/0", "one", "1.5", 1.5, True, None])
def test_parse_rational_rejects(bad):
    with pytest.raises(LinalgError):
        parse_rational(bad)


def test_format_rational():
    assert format_rational(F(-3, 4)) == "-3/4"
    assert format_rational(F(6, 3)) == "2"


# --- Matrix Tests ---


def test_determinant_and_inverse():
    m = QMatrix.from_rows([[2, 1], [1, 2]])
    assert m.determinant() == 3
    assert m @ m.inverse() == QMatrix.identity(2)


def test_singular_inverse_raises():
    with pytest.raises(LinalgError):
        QMatrix.from_rows([[1, 2], [2, 4]]).inverse()


def test_rank_and_nullspace():
    m = QMatrix.from_rows([[1, 2], [2, 4]])
    assert rank(m) == 1
    (kernel,) = nullspace(m)
    assert m.apply(kernel) == (0, 0)


def test_apply_covector_is_pullback():
    m = QMatrix.from_rows([[1, 2], [3, 4]])
    assert m.apply_covector(vector([1, 1])) == (4, 6)


def test_require_gram_rejects_indefinite():
    with pytest.raises(LinalgError):
        require_gram(QMatrix.from_rows([[1, 2], [2, 1]]))
    with pytest.raises(LinalgError):
        require_gram(QMatrix.from_rows([[1, 1], [0, 1]]))


def test_norm_sq_uses_gram():
    gram = QMatrix.from_rows([[2, -1], [-1, 2]])
    assert norm_sq(gram, vector([1, 1])) == 2


# --- Integer Normal Form Tests ---


def test_smith_normal_form_classic_example():
    a = QMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    snf = smith_normal_form(a)
    assert snf.diagonal == [2, 6, 12]
    assert snf.U @ a @ snf.V == snf.D
    assert abs(snf.U.determinant()) == 1
    assert abs(snf.V.determinant()) == 1


def test_smith_normal_form_rectangular():
    a = QMatrix.from_rows([[2, 0], [0, 3], [0, 0]])
    snf = smith_normal_form(a)
    assert snf.diagonal == [1, 6]
    assert snf.rank == 2


def test_smith_normal_form_rejects_fractions():
    with pytest.raises(LinalgError):
        smith_normal_form(QMatrix.from_rows([["1/2"]]))


def test_lattice_basis_is_hermite_form():
    basis = lattice_basis([vector([2, 0]), vector([0, 2]), vector([1, 1])], 2)
    assert basis == [(1, 1), (0, 2)]


def test_lattice_basis_rational_generators():
    basis = lattice_basis([vector(["1/2", "0"]), vector(["0", "1/3"])], 2)
    assert basis == [(F(1, 2), 0), (0, F(1, 3))]


def test_integer_kernel():
    m = QMatrix.from_rows([[1, 1, 1]])
    kernel = integer_kernel(m)
    assert len(kernel) == 2
    for v in kernel:
        assert m.apply(v) == (0,)
        assert all(x.denominator == 1 for x in v)
    span = QMatrix.from_columns(kernel, dim=3)
    assert integer_solve(span, vector([1, -1, 0])) is not None
    assert integer_solve(span, vector([1, 0, -1])) is not None
