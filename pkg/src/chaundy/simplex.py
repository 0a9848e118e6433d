"""Exact Dirichlet integrals and the split of the simplex at an inner point.

Sub-simplex ``i`` (1-based, ``1 <= i <= n+1``) has vertex ``x`` plus the
vertices ``0, e1, ..., en`` with ``e_i`` removed (``0`` removed when
``i = n+1``).  Its integral of ``t**a (1 - |t|)**a_{n+1}`` is a polynomial
in ``x``, computed symbolically with barycentric coordinates and
integrated monomial by monomial with the Dirichlet formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import UsageError
from .exact import factorial
from .multivar import build_f
from .poly import MultiPoly
from .report import VerifyReport, exact_report, stopwatch


@dataclass(frozen=True)
class SimplexSplitParams:
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        if len(self.a) < 2:
            raise UsageError("need n+1 >= 2 exponents")
        if any(v < 0 for v in self.a):
            raise UsageError("exponents must be nonnegative integers")

    @property
    def n(self) -> int:
        return len(self.a) - 1


@dataclass(frozen=True)
class SubSimplexResult:
    i: int
    value: MultiPoly


def _params(a) -> SimplexSplitParams:
    return a if isinstance(a, SimplexSplitParams) else SimplexSplitParams(tuple(a))


def dirichlet(a) -> Fraction:
    """``prod a_i! / (sum a_i + n)!`` over the standard n-simplex."""
    a = _params(a).a
    n = len(a) - 1
    return Fraction(math.prod(factorial(v) for v in a), factorial(sum(a) + n))


def _vertices(i: int, n: int) -> list[tuple[int, ...]]:
    """The retained corners of the standard simplex, in index order (0 first)."""
    corners = [tuple([0] * n)] + [tuple(1 if j == k else 0 for j in range(n)) for k in range(n)]
    if i == n + 1:
        return corners[1:]
    return corners[:i] + corners[i + 1:]


def _det(rows: list[list[MultiPoly]], arity: int) -> MultiPoly:
    # Laplace expansion; n <= 4 in practice
    size = len(rows)
    if size == 0:
        return MultiPoly.constant(1, arity)
    if size == 1:
        return rows[0][0]
    total = MultiPoly.zero(arity)
    for col in range(size):
        entry = rows[0][col]
        if entry.is_zero():
            continue
        minor = [r[:col] + r[col + 1:] for r in rows[1:]]
        term = entry * _det(minor, arity)
        total = total + term if col % 2 == 0 else total - term
    return total


def jacobian(i: int, n: int) -> MultiPoly:
    """Positively oriented ``|det|`` of the affine map from the standard simplex."""
    xs = MultiPoly.variables(n)
    verts = _vertices(i, n)
    # column j is V_j - x
    rows = [[MultiPoly.constant(verts[j][r], n) - xs[r] for j in range(n)] for r in range(n)]
    det = _det(rows, n)
    centroid = [Fraction(1, n + 1)] * n
    return det if det.evaluate(centroid) > 0 else -det


def subsimplex_integral(i: int, a) -> SubSimplexResult:
    """Exact ``I^(i)(x)`` as a polynomial in x1..xn."""
    a = _params(a).a
    n = len(a) - 1
    if not 1 <= i <= n + 1:
        raise UsageError(f"sub-simplex index must be in 1..{n + 1}, got {i}")
    verts = _vertices(i, n)
    # variables: x1..xn, then barycentric s0 (weight of x), s1..sn (weights of verts)
    arity = 2 * n + 1
    allv = MultiPoly.variables(arity)
    xs, s0, ss = allv[:n], allv[n], allv[n + 1:]
    one = MultiPoly.constant(1, arity)
    t = [xs[r] * s0 + sum((ss[j].scale(verts[j][r]) for j in range(n)), MultiPoly.zero(arity))
         for r in range(n)]
    # 1 - |t| in barycentric form: weights sum to 1, so 1 - |t| = sum_w w (1 - |V|)
    rest = (one - sum(xs, MultiPoly.zero(arity))) * s0
    for j in range(n):
        if sum(verts[j]) == 0:
            rest = rest + ss[j]
    integrand = rest ** a[n]
    for r in range(n):
        integrand = integrand * t[r] ** a[r]
    acc: dict = {}
    for exp, c in integrand.terms.items():
        xpart, spart = exp[:n], exp[n:]
        # integral of s0^b0 s1^b1 ... sn^bn over the simplex of (s1..sn)
        weight = dirichlet(tuple(spart[1:]) + (spart[0],))
        acc[xpart] = acc.get(xpart, 0) + c * weight
    value = MultiPoly(n, acc) * jacobian(i, n)
    return SubSimplexResult(i, value)


def split_ratio_expected(i: int, a) -> MultiPoly:
    """``I^(i)(x) / I`` predicted by the cyclic-relabelling theorem."""
    a = _params(a).a
    n = len(a) - 1
    # sigma (1-based) is the rotation of 1..n+1 sending n to i
    sigma = [((j - 1 + i - n) % (n + 1)) + 1 for j in range(1, n + 2)]
    order = [sigma[n]] + sigma[: n]  # slots: sigma(n+1), sigma(1), ..., sigma(n)
    b = tuple(a[k - 1] for k in order)
    f = build_f(b, homogeneous=False)
    xs = MultiPoly.variables(n)
    last = MultiPoly.constant(1, n) - sum(xs, MultiPoly.zero(n))
    coords = xs + [last]
    return f.compose([coords[k - 1] for k in order])


def verify_split(a) -> VerifyReport:
    """Sub-simplex integrals add up to the full integral and match f termwise."""
    a = _params(a).a
    n = len(a) - 1
    with stopwatch() as t:
        total = dirichlet(a)
        pieces = [subsimplex_integral(i, a).value for i in range(1, n + 2)]
        residuals = [sum(pieces, MultiPoly.zero(n)) - total]
        for i, piece in enumerate(pieces, start=1):
            residuals.append(piece - split_ratio_expected(i, a).scale(total))
    return exact_report("dirichlet", {"a": list(a)}, residuals, t[0],
                        {"normalizer": total})


def verify_simplex_symmetry(a, sigma: Sequence[int]) -> VerifyReport:
    """``I^(i)_a(x) = I^(sigma^-1(i))_{a o sigma}(x o sigma)`` for every i.

    ``sigma`` is a 0-based permutation of range(n+1); index n stands for
    ``x_{n+1} = 1 - x1 - ... - xn``.
    """
    a = _params(a).a
    n = len(a) - 1
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(n + 1)):
        raise UsageError(f"{sigma!r} is not a permutation of 0..{n}")
    inverse = [0] * (n + 1)
    for pos, k in enumerate(sigma):
        inverse[k] = pos
    permuted = tuple(a[k] for k in sigma)
    xs = MultiPoly.variables(n)
    coords = xs + [MultiPoly.constant(1, n) - sum(xs, MultiPoly.zero(n))]
    images = [coords[sigma[r]] for r in range(n)]
    with stopwatch() as t:
        residuals = []
        for i in range(1, n + 2):
            lhs = subsimplex_integral(i, a).value
            j = inverse[i - 1] + 1
            rhs = subsimplex_integral(j, permuted).value.compose(images)
            residuals.append(lhs - rhs)
    return exact_report("simplex-symmetry", {"a": list(a), "sigma": list(sigma)}, residuals, t[0])
