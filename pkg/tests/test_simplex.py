import itertools
from fractions import Fraction

import pytest

from chaundy.errors import UsageError
from chaundy.hyper import incomplete_beta_exact
from chaundy.multivar import build_f
from chaundy.poly import MultiPoly
from chaundy.report import EXACT_PASS
from chaundy.simplex import (
    dirichlet,
    jacobian,
    split_ratio_expected,
    subsimplex_integral,
    verify_simplex_symmetry,
    verify_split,
)

X = MultiPoly.variable(0, 1)


def test_dirichlet_values():
    assert dirichlet((0, 0, 0)) == Fraction(1, 2)
    assert dirichlet((1, 2, 0)) == Fraction(1, 60)
    for perm in itertools.permutations((1, 2, 0)):
        assert dirichlet(perm) == Fraction(1, 60)


def test_dirichlet_against_monte_carlo_free_oracle():
    # one-dimensional case is the beta integral m! n! / (m+n+1)!
    assert dirichlet((2, 3)) == Fraction(2 * 6, 720)


def test_interval_piece():
    assert subsimplex_integral(1, (0, 0)).value == X


def test_one_dimensional_piece_is_incomplete_beta():
    for m, n in [(2, 3), (0, 4), (3, 0)]:
        piece = subsimplex_integral(1, (m, n)).value
        for t in (Fraction(1, 5), Fraction(2, 3)):
            assert piece.evaluate([t]) == incomplete_beta_exact(t, m + 1, n + 1)


def test_one_dimensional_ratio_formula():
    # I^(1)(x) / I = x^{m+1} sum_{k<=n} (m+1)_k/k! (1-x)^k
    m, n = 2, 3
    ratio = subsimplex_integral(1, (m, n)).value.scale(1 / dirichlet((m, n)))
    expected = build_f((n, m), homogeneous=False).compose([1 - X, X])
    assert ratio == expected


def test_centroid_pieces_equal():
    c = [Fraction(1, 3), Fraction(1, 3)]
    values = [subsimplex_integral(i, (0, 0, 0)).value.evaluate(c) for i in (1, 2, 3)]
    assert values == [Fraction(1, 6)] * 3


def test_index_out_of_range():
    with pytest.raises(UsageError):
        subsimplex_integral(0, (1, 1))
    with pytest.raises(UsageError):
        subsimplex_integral(4, (1, 1, 1))


@pytest.mark.parametrize("a", [(2, 3), (1, 1, 1), (1, 0, 2, 1), (0, 0, 0)])
def test_verify_split(a):
    assert verify_split(a).status == EXACT_PASS


def test_positive_inside():
    a = (1, 2, 0, 1)
    interior = [Fraction(1, 7), Fraction(2, 7), Fraction(1, 5)]
    for i in range(1, 5):
        assert subsimplex_integral(i, a).value.evaluate(interior) > 0


def test_degree_bound():
    a = (1, 2, 1)
    for i in (1, 2, 3):
        assert split_ratio_expected(i, a).total_degree() <= sum(a) + 1


def test_jacobian_positive_at_centroid():
    for n in (1, 2, 3):
        for i in range(1, n + 2):
            assert jacobian(i, n).evaluate([Fraction(1, n + 1)] * n) > 0


def test_symmetry():
    assert verify_simplex_symmetry((1, 2, 0), (0, 1, 2)).status == EXACT_PASS
    assert verify_simplex_symmetry((3, 1), (1, 0)).status == EXACT_PASS
    assert verify_simplex_symmetry((1, 2, 0), (1, 2, 0)).status == EXACT_PASS
    with pytest.raises(UsageError):
        verify_simplex_symmetry((1, 2, 0), (0, 1))
