from fractions import Fraction
from math import comb

import pytest

from chaundy.errors import DomainError, UsageError
from chaundy.onevar import build_p
from chaundy.paths import (
    RNG_ALGORITHM,
    enumerate_paths,
    enumerate_weighted_paths,
    horizontal_formula,
    mc_coin_toss,
    outcome_probabilities,
    prefix_property_holds,
    verify_mc,
    verify_paths,
    vertical_ending_counts,
    vertical_formula,
)
from chaundy.poly import MultiPoly
from chaundy.report import EXACT_PASS, NUMERIC_PASS

x, y = MultiPoly.variables(2)


def test_smallest_case():
    steps = sorted("".join(p.steps) for p in enumerate_paths(0, 0))
    assert steps == ["EN", "NE"]
    sums = enumerate_weighted_paths(0, 0)
    assert sums.total == x * (x + y) + y * (x + y) == (x + y) ** 2
    assert sums.count == 2


def test_vertical_ending_counts():
    assert vertical_ending_counts(2, 1) == {0: comb(2, 0), 1: comb(3, 1)}


def test_partition_and_counts():
    for m in range(7):
        for n in range(7):
            sums = enumerate_weighted_paths(m, n)
            assert sums.vertical == vertical_formula(m, n)
            assert sums.horizontal == horizontal_formula(m, n)
            assert sums.total == (x + y) ** (m + n + 2)
            assert sums.count == comb(m + n + 2, m + 1)


def test_prefix_property():
    assert all(prefix_property_holds(m, n) for m in range(5) for n in range(5))


def test_verify_paths_report():
    r = verify_paths(3, 4)
    assert r.status == EXACT_PASS
    assert r.details["paths"] == comb(9, 4)


def test_exact_probabilities():
    p = outcome_probabilities(Fraction(1, 2), 0, 0)
    assert p == {("heads-first", 0): Fraction(1, 2), ("tails-first", 0): Fraction(1, 2)}
    p = outcome_probabilities(0, 3, 2)
    assert p[("tails-first", 0)] == 1
    assert sum(p.values()) == 1


def test_probabilities_match_identity_terms():
    x0 = Fraction(3, 10)
    probs = outcome_probabilities(x0, 4, 6)
    assert len(probs) == 12
    assert sum(probs.values()) == 1
    tails_first = sum(v for (kind, _), v in probs.items() if kind == "tails-first")
    # the tails-first outcomes make up p_{m,n}(x)
    assert tails_first == build_p(4, 6).evaluate([x0])


def test_domain_and_usage_errors():
    with pytest.raises(DomainError):
        outcome_probabilities(Fraction(3, 2), 1, 1)
    with pytest.raises(UsageError):
        mc_coin_toss(0.3, 1, 1, 0, 1)


def test_mc_deterministic_and_sound():
    a = mc_coin_toss(0.3, 4, 6, 200_000, 7)
    b = mc_coin_toss(0.3, 4, 6, 200_000, 7)
    assert a == b
    assert sum(o.count for o in a) == 200_000
    assert all(o.deviation <= 4 * o.std_err for o in a)
    assert a != mc_coin_toss(0.3, 4, 6, 200_000, 8)


def test_mc_degenerate_coin():
    outcomes = mc_coin_toss(0, 2, 1, 1000, 3)
    counts = {(o.kind, o.k): o.count for o in outcomes}
    assert counts[("tails-first", 0)] == 1000


def test_verify_mc_report():
    r = verify_mc("3/10", 2, 3, 100_000, 11)
    assert r.status == NUMERIC_PASS
    assert r.details["rng"] == RNG_ALGORITHM
    assert r.details["probability_sum"] == 1
