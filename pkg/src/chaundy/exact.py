"""Exact integer/rational scalars.

``BigRational`` is :class:`fractions.Fraction`: it is always stored in lowest
terms with a positive denominator, and Python ints are unbounded.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

BigRational = Fraction
Number = Union[int, Fraction, float, complex]


def to_rational(value) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Strings are parsed as ``p/q`` or as a decimal (``"0.3"`` -> 3/10); floats
    are read through their shortest repr so that ``0.3`` also maps to 3/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot convert {value!r} to a rational")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def normalize(q):
    """Return an int when a Fraction has denominator 1 (cheaper arithmetic)."""
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


def pochhammer(a, k: int):
    """Rising factorial ``a (a+1) ... (a+k-1)``; 1 when ``k == 0``.

    Works for any numeric ``a`` (int, Fraction, float, complex); exact inputs
    give exact results.
    """
    if k < 0:
        raise ValueError("pochhammer needs k >= 0")
    result = 1
    for j in range(k):
        result *= a + j
    return result


def binomial(n: int, k: int) -> int:
    """C(n, k), with 0 outside ``0 <= k <= n``."""
    if k < 0 or k > n or n < 0:
        return 0
    return math.comb(n, k)


def factorial(k: int) -> int:
    if k < 0:
        raise ValueError("factorial needs k >= 0")
    return math.factorial(k)


def is_nonpositive_integer(a) -> bool:
    """True when ``a`` equals one of 0, -1, -2, ... (exactly, for exact types)."""
    if isinstance(a, complex):
        if a.imag != 0:
            return False
        a = a.real
    if isinstance(a, float):
        return a <= 0 and a.is_integer()
    q = Fraction(a)
    return q.denominator == 1 and q <= 0


def terminating_length(a, b):
    """Number of nonzero terms of a 2F1 with numerator parameters a, b.

    Returns ``N + 1`` when the smaller of the nonpositive integers among a, b
    is ``-N``; None when the series does not terminate.
    """
    bounds = [int(-_real(p)) for p in (a, b) if is_nonpositive_integer(p)]
    if not bounds:
        return None
    return min(bounds) + 1


def hyp2f1_coefficients(a, b, c, terms: int) -> list:
    """The first ``terms`` coefficients ``(a)_k (b)_k / ((c)_k k!)``.

    Raises ZeroDivisionError if ``(c)_k`` vanishes within range.
    """
    coeffs = []
    t = Fraction(1) if _is_exact(a, b, c) else 1.0
    for k in range(terms):
        coeffs.append(normalize(t) if isinstance(t, Fraction) else t)
        denom = (c + k) * (k + 1)
        if denom == 0:
            if k + 1 < terms:
                raise ZeroDivisionError(f"lower parameter hits a pole at k={k}")
            break
        t = t * (a + k) * (b + k) / denom
    return coeffs


def _real(p):
    return p.real if isinstance(p, complex) else p


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)
