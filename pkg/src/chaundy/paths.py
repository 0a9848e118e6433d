"""Weighted lattice paths from (0,0) to (m+1, n+1) and the coin-toss simulation.

An east step from height ``j`` weighs ``x`` (``x+y`` once ``j = n+1``); a
north step at abscissa ``i`` weighs ``y`` (``x+y`` once ``i = m+1``).  Every
path weight is therefore ``x**a y**b (x+y)**c`` and paths are aggregated
by ``(last step, a, b, c)`` before any polynomial is formed.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, UsageError
from .exact import binomial, to_rational
from .poly import MultiPoly
from .report import FAIL, NUMERIC_PASS, VerifyReport, exact_report, stopwatch

EAST, NORTH = "E", "N"
RNG_ALGORITHM = "numpy.random.Philox(4x64-10)"
_CHUNK = 1 << 16

_x, _y = MultiPoly.variables(2)
_s = _x + _y


@dataclass(frozen=True)
class LatticePath:
    steps: tuple[str, ...]
    m: int
    n: int

    def __post_init__(self):
        if self.steps.count(EAST) != self.m + 1 or self.steps.count(NORTH) != self.n + 1:
            raise UsageError("path must have m+1 east and n+1 north steps")

    def exponents(self) -> tuple[int, int, int]:
        """(power of x, power of y, power of x+y) in the weight."""
        i = j = 0
        a = b = c = 0
        for step in self.steps:
            if step == EAST:
                if j < self.n + 1:
                    a += 1
                else:
                    c += 1
                i += 1
            else:
                if i < self.m + 1:
                    b += 1
                else:
                    c += 1
                j += 1
        return a, b, c

    def weight(self) -> MultiPoly:
        a, b, c = self.exponents()
        return MultiPoly(2, {(a, b): 1}) * _s**c


def enumerate_paths(m: int, n: int):
    """Yield every monotone path from (0,0) to (m+1, n+1)."""
    if m < 0 or n < 0:
        raise UsageError("m and n must be nonnegative")

    def rec(i, j, prefix):
        if i == m + 1 and j == n + 1:
            yield LatticePath(tuple(prefix), m, n)
            return
        if i < m + 1:
            prefix.append(EAST)
            yield from rec(i + 1, j, prefix)
            prefix.pop()
        if j < n + 1:
            prefix.append(NORTH)
            yield from rec(i, j + 1, prefix)
            prefix.pop()

    yield from rec(0, 0, [])


@lru_cache(maxsize=None)
def _weight_classes(m: int, n: int) -> tuple[tuple[tuple[str, int, int, int], int], ...]:
    counts: Counter = Counter()
    for path in enumerate_paths(m, n):
        counts[(path.steps[-1],) + path.exponents()] += 1
    return tuple(sorted(counts.items()))


@dataclass(frozen=True)
class PathSums:
    total: MultiPoly
    vertical: MultiPoly
    horizontal: MultiPoly
    count: int


def enumerate_weighted_paths(m: int, n: int) -> PathSums:
    """Sum of path weights, split by the direction of the final step."""
    vertical: dict = Counter()
    horizontal: dict = Counter()
    count = 0
    for (last, a, b, c), mult in _weight_classes(m, n):
        target = vertical if last == NORTH else horizontal
        target[(a, b, c)] += mult
        count += mult

    def build(classes):
        out = MultiPoly.zero(2)
        for (a, b, c), mult in sorted(classes.items()):
            out = out + (MultiPoly(2, {(a, b): mult}) * _s**c)
        return out

    v, h = build(vertical), build(horizontal)
    return PathSums(v + h, v, h, count)


def vertical_ending_counts(m: int, n: int) -> dict[int, int]:
    """Number of north-ending paths whose last east step is at height k."""
    out: Counter = Counter()
    for path in enumerate_paths(m, n):
        if path.steps[-1] != NORTH:
            continue
        j = 0
        height = None
        for step in path.steps:
            if step == EAST:
                height = j
            else:
                j += 1
        out[height] += 1
    return dict(sorted(out.items()))


def vertical_formula(m: int, n: int) -> MultiPoly:
    """``x**(m+1) sum_{k<=n} C(m+k,k) y**k (x+y)**(n-k+1)``."""
    return sum(
        (MultiPoly(2, {(m + 1, k): binomial(m + k, k)}) * _s ** (n - k + 1) for k in range(n + 1)),
        MultiPoly.zero(2),
    )


def horizontal_formula(m: int, n: int) -> MultiPoly:
    """``y**(n+1) sum_{k<=m} C(n+k,k) x**k (x+y)**(m-k+1)``."""
    return sum(
        (MultiPoly(2, {(k, n + 1): binomial(n + k, k)}) * _s ** (m - k + 1) for k in range(m + 1)),
        MultiPoly.zero(2),
    )


def verify_paths(m: int, n: int) -> VerifyReport:
    """Weighted path sums against the binomial total and the two closed forms."""
    with stopwatch() as t:
        sums = enumerate_weighted_paths(m, n)
        residuals = [
            sums.total - _s ** (m + n + 2),
            sums.vertical - vertical_formula(m, n),
            sums.horizontal - horizontal_formula(m, n),
        ]
        expected = binomial(m + n + 2, m + 1)
        if sums.count != expected:
            residuals.append(MultiPoly.constant(sums.count - expected, 2))
    return exact_report("paths", {"m": m, "n": n}, residuals, t[0], {"paths": sums.count})


def prefix_property_holds(m: int, n: int) -> bool:
    """At every reachable non-final point the outgoing step weights sum to x+y."""
    for i in range(m + 2):
        for j in range(n + 2):
            if i == m + 1 and j == n + 1:
                continue
            total = MultiPoly.zero(2)
            if i < m + 1:
                total = total + (_x if j < n + 1 else _s)
            if j < n + 1:
                total = total + (_y if i < m + 1 else _s)
            if total != _s:
                return False
    return True


@dataclass(frozen=True)
class McOutcome:
    kind: str  # "heads-first" or "tails-first"
    k: int  # tails seen (heads-first) or heads seen (tails-first)
    exact_prob: Fraction
    empirical_freq: float
    std_err: float
    count: int = 0

    @property
    def deviation(self) -> float:
        return abs(self.empirical_freq - float(self.exact_prob))


def outcome_probabilities(x, m: int, n: int) -> dict[tuple[str, int], Fraction]:
    """Exact probability of each final outcome at ``Pr(head) = x``."""
    q = to_rational(x)
    if not 0 <= q <= 1:
        raise DomainError("x must lie in [0, 1]")
    out = {}
    for k in range(n + 1):
        out[("heads-first", k)] = binomial(m + k, k) * q ** (m + 1) * (1 - q) ** k
    for k in range(m + 1):
        out[("tails-first", k)] = binomial(n + k, k) * (1 - q) ** (n + 1) * q**k
    return {key: Fraction(v) for key, v in out.items()}


def _simulate(x: float, m: int, n: int, trials: int, seed: int) -> Counter:
    rng = np.random.Generator(np.random.Philox(seed))
    width = m + n + 1
    counts: Counter = Counter()
    done = 0
    while done < trials:
        size = min(_CHUNK, trials - done)
        heads = rng.random((size, width)) < x
        h = np.cumsum(heads, axis=1)
        t = np.arange(1, width + 1) - h
        h_hit = h >= m + 1
        t_hit = t >= n + 1
        # both can't fire on the same toss; width tosses always decide
        h_first = np.where(h_hit.any(axis=1), h_hit.argmax(axis=1), width)
        t_first = np.where(t_hit.any(axis=1), t_hit.argmax(axis=1), width)
        heads_win = h_first < t_first
        rows = np.arange(size)
        k_heads = t[rows, np.minimum(h_first, width - 1)]
        k_tails = h[rows, np.minimum(t_first, width - 1)]
        for k, c in zip(*np.unique(k_heads[heads_win], return_counts=True)):
            counts[("heads-first", int(k))] += int(c)
        for k, c in zip(*np.unique(k_tails[~heads_win], return_counts=True)):
            counts[("tails-first", int(k))] += int(c)
        done += size
    return counts


def mc_coin_toss(x, m: int, n: int, trials: int, seed: int) -> list[McOutcome]:
    """Toss a coin with ``Pr(head) = x`` until m+1 heads or n+1 tails.

    Deterministic for a given seed. Outcomes are listed heads-first (k = 0..n)
    then tails-first (k = 0..m).
    """
    if trials < 1:
        raise UsageError("trials must be at least 1")
    if m < 0 or n < 0:
        raise UsageError("m and n must be nonnegative")
    probs = outcome_probabilities(x, m, n)
    counts = _simulate(float(to_rational(x)), m, n, trials, int(seed))
    out = []
    for key, p in probs.items():
        kind, k = key
        c = counts.get(key, 0)
        pf = float(p)
        out.append(McOutcome(kind, k, p, c / trials, math.sqrt(pf * (1 - pf) / trials), c))
    return out


def verify_mc(x, m: int, n: int, trials: int, seed: int, sigmas: float = 4.0) -> VerifyReport:
    """Simulated frequencies within ``sigmas`` standard errors of the exact law."""
    with stopwatch() as t:
        outcomes = mc_coin_toss(x, m, n, trials, seed)
    total = sum((o.exact_prob for o in outcomes), Fraction(0))
    worst = max(o.deviation / o.std_err if o.std_err else (0.0 if o.deviation == 0 else math.inf)
                for o in outcomes)
    ok = total == 1 and worst <= sigmas
    witness = None
    if total != 1:
        witness = f"exact probabilities sum to {total}"
    elif not ok:
        witness = f"deviation {worst:.3f} standard errors"
    details = {
        "rng": RNG_ALGORITHM,
        "sigmas": sigmas,
        "probability_sum": total,
        "outcomes": [
            {"kind": o.kind, "k": o.k, "exact": o.exact_prob, "count": o.count,
             "empirical": o.empirical_freq, "std_err": o.std_err}
            for o in outcomes
        ],
    }
    params = {"x": str(to_rational(x)), "m": m, "n": n, "trials": trials, "seed": seed}
    return VerifyReport("mc", params, NUMERIC_PASS if ok else FAIL, worst, t[0], witness, details)
