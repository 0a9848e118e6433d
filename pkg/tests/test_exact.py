from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chaundy.exact import (
    binomial,
    factorial,
    hyp2f1_coefficients,
    is_nonpositive_integer,
    pochhammer,
    terminating_length,
    to_rational,
)

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 100)


def test_pochhammer_examples():
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(3, 2) == 12
    assert pochhammer(-2, 3) == 0


def test_binomial_examples():
    assert binomial(5, 2) == 10
    assert binomial(9, 0) == 1
    assert binomial(4, 2) == 6
    assert binomial(4, -1) == 0
    assert binomial(4, 5) == 0


def test_factorial_examples():
    assert factorial(0) == 1
    assert factorial(5) == 120
    assert factorial(10) == 3628800
    with pytest.raises(ValueError):
        factorial(-1)


def test_binomial_factorial_is_pochhammer():
    for n in range(51):
        for k in range(51):
            assert binomial(n + k, k) * factorial(k) == pochhammer(n + 1, k)


@given(rationals, st.integers(0, 20), st.integers(0, 20))
def test_pochhammer_splits(a, j, k):
    assert pochhammer(a, j + k) == pochhammer(a, j) * pochhammer(a + j, k)


@given(rationals, rationals.filter(lambda q: q != 0))
def test_rational_round_trips(p, q):
    assert (p + q) - q == p
    assert (p * q) / q == p


def test_to_rational_parsing():
    assert to_rational("3/10") == Fraction(3, 10)
    assert to_rational("0.3") == Fraction(3, 10)
    assert to_rational(0.3) == Fraction(3, 10)
    assert to_rational(-2) == -2
    with pytest.raises(ValueError):
        to_rational("three")
    with pytest.raises(ValueError):
        to_rational(float("nan"))


def test_reduced_storage():
    q = to_rational("6/8")
    assert (q.numerator, q.denominator) == (3, 4)


def test_terminating_length():
    assert terminating_length(-3, Fraction(1, 2)) == 4
    assert terminating_length(Fraction(1, 2), 0) == 1
    assert terminating_length(Fraction(1, 2), 3) is None
    assert is_nonpositive_integer(0) and is_nonpositive_integer(-4)
    assert not is_nonpositive_integer(Fraction(-1, 2))


def test_hyp2f1_coefficients_exact():
    # 2F1(-2, 1; 3; z) = 1 - 2/3 z + 1/6 z^2
    assert hyp2f1_coefficients(-2, 1, 3, 3) == [1, Fraction(-2, 3), Fraction(1, 6)]


def test_hyp2f1_coefficients_pole_before_end():
    with pytest.raises(ZeroDivisionError):
        hyp2f1_coefficients(-3, 1, -1, 4)
