from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vertexlab.exactalg import ExactMatrix, GaussianRational, I, ONE, ZERO, gq, rank

rationals = st.fractions(
    min_value=-9, max_value=9, max_denominator=9
)
scalars = st.builds(GaussianRational, rationals, rationals)
small_ints = st.integers(min_value=-4, max_value=4)


def test_norm_identity():
    assert gq(1, 1) * gq(1, -1) == gq(2)


def test_i_squared():
    assert I * I == gq(-1)


def test_rational_addition():
    assert gq(Fraction(2, 3)) + gq(Fraction(1, 3)) == ONE


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_pow():
    assert I ** 2 == gq(-1)
    assert gq(2) ** -2 == gq(Fraction(1, 4))
    assert gq(Fraction(1, 2), 1) ** 0 == ONE


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@given(scalars)
def test_inverse_roundtrip(a):
    if a:
        assert a * a.inverse() == ONE


@given(scalars)
def test_string_roundtrip(a):
    assert GaussianRational.parse(str(a)) == a


@pytest.mark.parametrize(
    "text,value",
    [
        ("3", gq(3)),
        ("-3/2", gq(Fraction(-3, 2))),
        ("1/2*i", gq(0, Fraction(1, 2))),
        ("-3/2+1/2*i", gq(Fraction(-3, 2), Fraction(1, 2))),
        ("0", ZERO),
    ],
)
def test_parse_examples(text, value):
    assert GaussianRational.parse(text) == value


@pytest.mark.parametrize("text", ["", "a", "3+", "*i", "1.5", "3 + 4"])
def test_parse_rejects_garbage(text):
    with pytest.raises(ValueError):
        GaussianRational.parse(text)


def test_rank_identity():
    assert rank(ExactMatrix.identity(3)) == 3


def test_rank_all_ones():
    m = ExactMatrix(2, 2, [1, 1, 1, 1])
    assert rank(m) == 1


def test_rank_m2_of_2():
    # hand elimination on [[4,2],[2,4]]: R2 - R1/2 leaves [0, 3]
    m = ExactMatrix(2, 2, [4, 2, 2, 4])
    assert rank(m) == 2


def test_rank_empty():
    assert rank(ExactMatrix(0, 0, [])) == 0
    assert rank(ExactMatrix(2, 2, [0, 0, 0, 0])) == 0


def test_rank_complex_entries():
    m = ExactMatrix(2, 2, [ONE, I, I, gq(-1)])  # second row = i * first row
    assert rank(m) == 1


@given(st.lists(small_ints, min_size=9, max_size=9))
def test_rank_transpose(entries):
    m = ExactMatrix(3, 3, entries)
    assert rank(m) == rank(m.transpose())


@given(
    st.lists(small_ints, min_size=16, max_size=16),
    st.lists(small_ints, min_size=16, max_size=16),
)
def test_rank_product_bound(ea, eb):
    a = ExactMatrix(4, 4, ea)
    b = ExactMatrix(4, 4, eb)
    assert rank(a @ b) <= min(rank(a), rank(b))


@given(st.lists(small_ints, min_size=16, max_size=16))
def test_rank_paths_agree(entries):
    # scaling by a nonzero scalar never changes rank, but it reroutes the
    # computation: ints -> fraction-free, 1/3 -> plain Fraction, i -> generic
    m = ExactMatrix(4, 4, entries)
    r = rank(m)
    assert rank(m.scaled(Fraction(1, 3))) == r
    assert rank(m.scaled(I)) == r


@given(
    st.lists(small_ints, min_size=12, max_size=12),
    st.lists(small_ints, min_size=12, max_size=12),
)
def test_matmul_paths_agree(ea, eb):
    a = ExactMatrix(3, 4, ea)
    b = ExactMatrix(4, 3, eb)
    plain = a @ b
    assert a.scaled(Fraction(1, 2)) @ b == plain.scaled(Fraction(1, 2))
    assert a.scaled(I) @ b == plain.scaled(I)
    third = plain.scaled(Fraction(1, 3))
    assert a.scaled(Fraction(1, 3)) @ b == third


def test_matmul_identity():
    m = ExactMatrix(2, 3, [1, 2, 3, 4, 5, 6])
    assert ExactMatrix.identity(2) @ m == m


def test_matmul_complex():
    a = ExactMatrix(1, 2, [I, ONE])
    b = ExactMatrix(2, 1, [ONE, I])
    assert (a @ b)[0, 0] == gq(0, 2)


def test_diagonal_and_scaled():
    d = ExactMatrix.diagonal([1, -1])
    assert d[0, 0] == ONE and d[1, 1] == gq(-1) and d[0, 1] == ZERO
    assert d.scaled(-1) == ExactMatrix.diagonal([-1, 1])


def test_entry_count_validated():
    with pytest.raises(ValueError):
        ExactMatrix(2, 2, [1, 2, 3])
