import itertools
from fractions import Fraction
from math import factorial

import pytest

from vertexlab.errors import GuardExceeded
from vertexlab.exactalg import ExactMatrix, GaussianRational, ONE, gq, rank
from vertexlab.graphs import Permutation
from vertexlab.symgroup import (
    IntegerPartition,
    PolynomialInD,
    char_sum_lhs,
    char_sum_rhs,
    character,
    class_size,
    dimension,
    m_matrix,
    m_rank_formula,
    partitions_of,
    rectangular_dimension,
    signed_orbit_sum,
)

P = IntegerPartition


# -- partitions -----------------------------------------------------------------

def test_partitions_of_zero():
    assert partitions_of(0) == [P(())]


def test_partition_counts():
    # p(4) = 5 and p(6) = 11 by hand enumeration
    assert len(partitions_of(4)) == 5
    assert len(partitions_of(6)) == 11


def test_partitions_reverse_lexicographic():
    got = [p.parts for p in partitions_of(4)]
    assert got == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_partitions_guard():
    with pytest.raises(GuardExceeded):
        partitions_of(13)


def test_partition_validation():
    with pytest.raises(ValueError):
        P((1, 2))
    with pytest.raises(ValueError):
        P((2, 0))


def test_conjugate_and_cells():
    lam = P((3, 1))
    assert lam.conjugate() == P((2, 1, 1))
    assert lam.cells() == [(1, 1), (1, 2), (1, 3), (2, 1)]
    assert lam.height == 2 and lam.n == 4


# -- dimensions ------------------------------------------------------------------

def test_dimension_row_and_column():
    for n in range(1, 8):
        assert dimension(P((n,))) == 1
        assert dimension(P((1,) * n)) == 1


def test_dimension_square_two():
    assert dimension(P((2, 2))) == 2


def test_dimension_sum_of_squares():
    for n in range(8):
        assert sum(dimension(lam) ** 2 for lam in partitions_of(n)) == factorial(n)


def test_rectangular_dimension_examples():
    for m in (1, 2, 3, 4):
        assert rectangular_dimension(1, m) == 1
    assert rectangular_dimension(2, 2) == 2
    assert rectangular_dimension(3, 2) == 5
    assert rectangular_dimension(3, 2) == dimension(P((2, 2, 2)))


def test_rectangular_dimension_matches_hook_formula():
    for d in (1, 2, 3):
        for m in (1, 2, 3):
            assert rectangular_dimension(d, m) == dimension(P((m,) * d))


def test_rectangular_dimension_double_product_form():
    # n! / prod_{i<=d} prod_{j<=m} (i+j-1)
    for d in (1, 2, 3):
        for m in (1, 2, 3):
            den = 1
            for i in range(1, d + 1):
                for j in range(1, m + 1):
                    den *= i + j - 1
            assert rectangular_dimension(d, m) == factorial(d * m) // den


def test_rectangular_dimension_guard():
    with pytest.raises(GuardExceeded):
        rectangular_dimension(7, 6)


def test_root_growth_trend():
    # (f^{lambda_m})^(1/(dm)) nondecreasing in m, via integer powers:
    # a^(1/(dm)) <= b^(1/(d(m+1)))  iff  a^(m+1) <= b^m
    for d in (2, 3):
        for m in (1, 2, 3):
            a = rectangular_dimension(d, m)
            b = rectangular_dimension(d, m + 1)
            assert a ** (m + 1) <= b ** m


# -- characters -------------------------------------------------------------------

def test_trivial_character():
    for n in range(1, 7):
        for mu in partitions_of(n):
            assert character(P((n,)), mu) == 1


def test_sign_character():
    for n in range(1, 7):
        for mu in partitions_of(n):
            assert character(P((1,) * n), mu) == (-1) ** (n - mu.height)


def _standard_rep_trace(pi: Permutation) -> Fraction:
    # explicit 2-dimensional standard representation of S_3 on the
    # sum-zero subspace of Q^3, basis u1 = e1-e2, u2 = e2-e3
    basis = {(1, -1, 0): "u1", (0, 1, -1): "u2"}
    coords = {
        (1, -1, 0): (1, 0),
        (0, 1, -1): (0, 1),
        (1, 0, -1): (1, 1),
        (-1, 1, 0): (-1, 0),
        (0, -1, 1): (0, -1),
        (-1, 0, 1): (-1, -1),
    }
    trace = 0
    for col, vec in enumerate([(1, -1, 0), (0, 1, -1)]):
        image = [0, 0, 0]
        for i in range(3):
            image[pi(i + 1) - 1] += vec[i]
        trace += coords[tuple(image)][col]
    return Fraction(trace)


def test_standard_character_of_s3():
    # spec oracle: traces of the explicit standard representation
    by_type = {}
    for pi in Permutation.all_of_degree(3):
        by_type.setdefault(pi.cycle_type(), set()).add(_standard_rep_trace(pi))
    assert by_type == {(1, 1, 1): {2}, (2, 1): {0}, (3,): {-1}}
    lam = P((2, 1))
    assert character(lam, P((1, 1, 1))) == 2
    assert character(lam, P((2, 1))) == 0
    assert character(lam, P((3,))) == -1


def test_character_at_identity_is_dimension():
    for n in range(1, 7):
        for lam in partitions_of(n):
            assert character(lam, P((1,) * n)) == dimension(lam)


def test_character_orthogonality():
    for n in range(1, 6):
        lams = partitions_of(n)
        for la, lb in itertools.product(lams, repeat=2):
            acc = sum(
                class_size(mu) * character(la, mu) * character(lb, mu)
                for mu in partitions_of(n)
            )
            assert acc == (factorial(n) if la == lb else 0)


def test_character_size_mismatch():
    with pytest.raises(ValueError):
        character(P((2, 1)), P((2,)))


def test_class_sizes():
    assert class_size(P((1, 1, 1))) == 1
    assert class_size(P((2, 1))) == 3
    assert class_size(P((3,))) == 2
    for n in range(1, 7):
        assert sum(class_size(mu) for mu in partitions_of(n)) == factorial(n)


# -- polynomials -------------------------------------------------------------------

def test_polynomial_trim_and_eq():
    assert PolynomialInD([1, 2, 0, 0]) == PolynomialInD([1, 2])
    assert PolynomialInD([]) == PolynomialInD([0])


def test_polynomial_arithmetic():
    p = PolynomialInD([0, 1])  # d
    q = PolynomialInD([1, 1])  # d + 1
    assert p * q == PolynomialInD([0, 1, 1])
    assert p + q == PolynomialInD([1, 2])
    assert (p * q).evaluate(gq(3)) == gq(12)
    assert 2 * p == PolynomialInD([0, 2])


def test_polynomial_str():
    assert str(PolynomialInD([1, -1, 2])) == "2*d^2 + -1*d + 1"
    assert str(PolynomialInD([])) == "0"


# -- character sums -----------------------------------------------------------------

def test_char_sum_hand_examples():
    assert char_sum_lhs(P((2,))) == PolynomialInD([0, 1, 1])  # d^2 + d
    assert char_sum_rhs(P((2,))) == PolynomialInD([0, 1, 1])
    assert char_sum_lhs(P((1, 1))) == PolynomialInD([0, -1, 1])  # d^2 - d
    assert char_sum_rhs(P((1, 1))) == PolynomialInD([0, -1, 1])


def test_char_sum_row_shape_rising_factorial():
    n = 4
    poly = PolynomialInD([1])
    for j in range(n):
        poly = poly * PolynomialInD([j, 1])  # d (d+1) ... (d+n-1)
    assert char_sum_rhs(P((n,))) == poly


def test_char_sum_identity_small():
    for n in range(0, 6):
        for lam in partitions_of(n):
            assert char_sum_lhs(lam) == char_sum_rhs(lam)


def test_char_sum_matches_direct_enumeration():
    # cross-validate the cycle-type grouping against a sum over all of S_n
    for n in (1, 2, 3, 4):
        for lam in partitions_of(n):
            coeffs = [0] * (n + 1)
            for pi in Permutation.all_of_degree(n):
                coeffs[pi.orbit_count()] += character(lam, P(pi.cycle_type()))
            assert char_sum_lhs(lam) == PolynomialInD(coeffs)


def test_char_sum_guard():
    with pytest.raises(GuardExceeded):
        char_sum_lhs(P((8,)))


# -- M_n(d) -------------------------------------------------------------------------

def test_m_matrix_small():
    assert m_matrix(1, gq(7)) == ExactMatrix(1, 1, [7])
    two = m_matrix(2, gq(3))
    assert two == ExactMatrix(2, 2, [9, 3, 3, 9])


def test_m_matrix_entry_layout():
    d = gq(2)
    m = m_matrix(3, d)
    perms = Permutation.all_of_degree(3)
    # spot check: diagonal entries are d^n
    for i in range(6):
        assert m[i, i] == gq(8)
    # o(rho sigma^-1) is symmetric in the matrix sense
    for i in range(6):
        for j in range(6):
            assert m[i, j] == m[j, i]
    assert len(perms) == 6


def test_m_matrix_guard():
    with pytest.raises(GuardExceeded):
        m_matrix(6, gq(1))


def test_m_rank_formula_examples():
    assert m_rank_formula(3, gq(Fraction(1, 2))) == 6
    assert m_rank_formula(3, gq(1)) == 1
    assert m_rank_formula(3, gq(2)) == 5
    assert m_rank_formula(3, gq(0)) == 0
    assert m_rank_formula(3, gq(-2)) == 5


def test_m_rank_formula_rejects_nonreal():
    with pytest.raises(ValueError):
        m_rank_formula(2, GaussianRational(1, 1))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("dstr", ["0", "1", "-1", "2", "1/2", "-3/2"])
def test_m_matrix_rank_matches_formula_small(n, dstr):
    d = gq(Fraction(dstr))
    assert rank(m_matrix(n, d)) == m_rank_formula(n, d)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("dstr", ["1", "2", "1/2"])
def test_m_matrix_sign_conjugation(n, dstr):
    d = gq(Fraction(dstr))
    signs = [pi.sign() for pi in Permutation.all_of_degree(n)]
    delta = ExactMatrix.diagonal(signs)
    lhs = m_matrix(n, -d)
    rhs = (delta @ m_matrix(n, d) @ delta).scaled((-1) ** n)
    assert lhs == rhs
    assert rank(lhs) == rank(m_matrix(n, d))


def test_sign_orbit_identity():
    # sgn(pi) = (-1)^{n - o(pi)}, sign computed independently by inversions
    for n in range(1, 7):
        for pi in Permutation.all_of_degree(n):
            assert pi.sign() == (-1) ** (n - pi.orbit_count())


# -- signed orbit sums -----------------------------------------------------------------

def test_signed_orbit_sum_examples():
    assert signed_orbit_sum(3, gq(2)) == gq(0)  # 8 - 3*4 + 2*2
    assert signed_orbit_sum(2, gq(2)) == gq(2)  # d^2 - d at 2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_signed_orbit_sum_vanishes_past_colors(n):
    assert signed_orbit_sum(n + 1, gq(n)) == gq(0)


def test_signed_orbit_sum_is_falling_factorial():
    # oracle: direct enumeration of S_k, sign by inversion parity
    test_points = [gq(0), gq(1), gq(5), gq(Fraction(1, 2)), gq(Fraction(-3, 2)), GaussianRational(1, 1)]
    for k in range(0, 6):
        for d in test_points:
            brute = sum(
                (pi.sign() * d ** pi.orbit_count() for pi in Permutation.all_of_degree(k)),
                start=gq(0),
            )
            falling = gq(1)
            for j in range(k):
                falling = falling * (d - j)
            assert signed_orbit_sum(k, d) == brute == falling


def test_signed_orbit_sum_guard():
    with pytest.raises(GuardExceeded):
        signed_orbit_sum(9, gq(1))
