"""The n-variable identity, its Lauricella coefficient table and its PDEs.

For ``a = (a1, ..., an)`` and ``s = x1 + ... + xn``::

    f_a(x) = xn**(an+1) * sum_{k <= a'} (an+1)_{|k|} / k! * x'**k * s**(|a'| - |k|)

where ``a' = (a1, ..., a_{n-1})``.  The cyclic sum of ``f`` over rotations of
(a, x) is ``s**(|a|+1)``.

Permutations are 0-based tuples: ``sigma[i]`` is the index placed in slot i.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import UsageError
from .exact import factorial, pochhammer
from .poly import MultiPoly
from .report import VerifyReport, exact_report, stopwatch


@dataclass(frozen=True)
class MultiVarParams:
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        if len(self.a) < 2:
            raise UsageError("need at least two exponent bounds")
        if any(v < 0 for v in self.a):
            raise UsageError("exponent bounds must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.a)


def _params(a) -> MultiVarParams:
    return a if isinstance(a, MultiVarParams) else MultiVarParams(tuple(a))


def closed_form_gamma(a: Sequence[int], k: Sequence[int]) -> Fraction:
    """``(an+1)_{|k|} / (k1! ... k_{n-1}!)``."""
    an = a[-1]
    return Fraction(pochhammer(an + 1, sum(k)), math.prod(factorial(v) for v in k))


def _box(bounds: Sequence[int]):
    return itertools.product(*(range(b + 1) for b in bounds))


def build_f(a, homogeneous: bool = True) -> MultiPoly:
    """``f_a`` in n variables; the inhomogeneous form drops the ``s`` powers."""
    a = _params(a).a
    n = len(a)
    head = a[:-1]
    top = sum(head)
    # group the box by |k| so that powers of s are applied by Horner's rule
    layers: list[dict] = [dict() for _ in range(top + 1)]
    for k in _box(head):
        layers[sum(k)][tuple(k) + (0,)] = closed_form_gamma(a, k)
    if homogeneous:
        s = sum(MultiPoly.variables(n), MultiPoly.zero(n))
        acc = MultiPoly.zero(n)
        for j in range(top + 1):
            acc = acc * s + MultiPoly(n, layers[j])
    else:
        acc = MultiPoly(n, {e: c for layer in layers for e, c in layer.items()})
    shift = [0] * n
    shift[-1] = a[-1] + 1
    return acc.shift(shift)


def permuted_f(a, sigma: Sequence[int], homogeneous: bool = True) -> MultiPoly:
    """``f_{a o sigma}(x o sigma)`` as a polynomial in x1..xn."""
    a = _params(a).a
    _check_perm(sigma, len(a))
    f = build_f(tuple(a[j] for j in sigma), homogeneous)
    return f.rename(tuple(sigma))


def cyclic_shifts(n: int) -> list[tuple[int, ...]]:
    return [tuple((i + j) % n for i in range(n)) for j in range(n)]


def _check_perm(sigma, n):
    if sorted(sigma) != list(range(n)):
        raise UsageError(f"{sigma!r} is not a permutation of 0..{n - 1}")


def simplex_images(n: int) -> list[MultiPoly]:
    """x1..x_{n-1} and ``1 - x1 - ... - x_{n-1}``, in n-1 variables."""
    xs = MultiPoly.variables(n - 1)
    last = MultiPoly.constant(1, n - 1) - sum(xs, MultiPoly.zero(n - 1))
    return xs + [last]


def on_simplex(p: MultiPoly) -> MultiPoly:
    """Restrict an n-variable polynomial to ``x1 + ... + xn = 1`` (eliminating xn)."""
    return p.compose(simplex_images(p.arity))


def verify_cyclic(a) -> VerifyReport:
    """Cyclic sum of f equals ``s**(|a|+1)``; inhomogeneous form sums to 1 on the simplex."""
    a = _params(a).a
    n = len(a)
    with stopwatch() as t:
        s = sum(MultiPoly.variables(n), MultiPoly.zero(n))
        hom = -(s ** (sum(a) + 1))
        inhom = MultiPoly.zero(n)
        for sigma in cyclic_shifts(n):
            hom = hom + permuted_f(a, sigma, True)
            inhom = inhom + permuted_f(a, sigma, False)
        inhom_res = on_simplex(inhom) - 1
    return exact_report("cyclic", {"a": list(a)}, [hom, inhom_res], t[0])


@dataclass
class CoeffTable:
    """Dense coefficients over the box ``0 <= k_i <= a_i`` (i < n)."""

    bounds: tuple[int, ...]
    entries: np.ndarray  # dtype=object, Fraction entries

    def __getitem__(self, k):
        return self.entries[tuple(k)]

    def to_json(self) -> dict:
        return {"bounds": list(self.bounds), "entries": _nested(self.entries.tolist())}

    def as_poly(self) -> MultiPoly:
        """``u = sum gamma_k x**k`` in n-1 variables."""
        arity = len(self.bounds)
        return MultiPoly(arity, {k: self.entries[k] for k in _box(self.bounds)})


def _nested(value):
    if isinstance(value, list):
        return [_nested(v) for v in value]
    return str(value)


def lauricella_coeffs(a, seed: Fraction | int | None = None) -> CoeffTable:
    """Fill the coefficient box by downward recursion from the top corner.

    ``seed`` overrides the corner value (default is the closed form there).
    Each step solves::

        (sum(a_i - k_i)) (an + 1 + |k|) g_k = -sum_i (k_i+1)(k_i - a_i) g_{k+e_i}
    """
    a = _params(a).a
    bounds = a[:-1]
    an = a[-1]
    entries = np.empty(tuple(b + 1 for b in bounds), dtype=object)
    entries[bounds] = Fraction(closed_form_gamma(a, bounds) if seed is None else seed)
    for k in sorted(_box(bounds), key=sum, reverse=True):
        if k == bounds:
            continue
        lead = sum(b - v for b, v in zip(bounds, k)) * (an + 1 + sum(k))
        assert lead > 0, "leading factor vanishes inside the box"
        acc = Fraction(0)
        for i, (ki, ai) in enumerate(zip(k, bounds)):
            if ki < ai:
                up = list(k)
                up[i] += 1
                acc += (ki + 1) * (ki - ai) * entries[tuple(up)]
        entries[k] = -acc / lead
    return CoeffTable(tuple(bounds), entries)


def closed_form_table(a) -> CoeffTable:
    a = _params(a).a
    bounds = a[:-1]
    entries = np.empty(tuple(b + 1 for b in bounds), dtype=object)
    for k in _box(bounds):
        entries[k] = closed_form_gamma(a, k)
    return CoeffTable(tuple(bounds), entries)


def recurrence_defect(a, table: CoeffTable) -> list[Fraction]:
    """Left side of the coefficient relation at every box point (all zero when satisfied)."""
    a = _params(a).a
    bounds = a[:-1]
    an = a[-1]
    out = []
    for k in _box(bounds):
        val = sum(b - v for b, v in zip(bounds, k)) * (an + 1 + sum(k)) * table[k]
        for i, (ki, ai) in enumerate(zip(k, bounds)):
            if ki < ai:
                up = list(k)
                up[i] += 1
                val += (ki + 1) * (ki - ai) * table[tuple(up)]
        out.append(Fraction(val))
    return out


def _check_arity(p: MultiPoly, arity: int):
    if p.arity != arity:
        raise UsageError(f"expected a polynomial in {arity} variables, got {p.arity}")


def _derivs(p: MultiPoly):
    d1 = [p.partial_derivative(i) for i in range(p.arity)]
    d2 = [[d1[i].partial_derivative(j) for j in range(p.arity)] for i in range(p.arity)]
    return d1, d2


def pde_residual_system(a, u: MultiPoly) -> list[MultiPoly]:
    """The individual operators, one per i < n, applied to ``u(x1..x_{n-1})``::

        x_i(1-x_i) d_i^2 u - x_i sum_{j!=i} x_j d_j d_i u - (a_i + (an+2) x_i) d_i u
            + a_i sum_j x_j d_j u + (an+1) a_i u
    """
    a = _params(a).a
    m = len(a) - 1
    _check_arity(u, m)
    an = a[-1]
    xs = MultiPoly.variables(m)
    d1, d2 = _derivs(u)
    euler = sum((xs[j] * d1[j] for j in range(m)), MultiPoly.zero(m))
    out = []
    for i in range(m):
        r = xs[i] * (1 - xs[i]) * d2[i][i]
        for j in range(m):
            if j != i:
                r = r - xs[i] * xs[j] * d2[j][i]
        r = r - (xs[i].scale(an + 2) + a[i]) * d1[i]
        r = r + euler.scale(a[i]) + u.scale((an + 1) * a[i])
        out.append(r)
    return out


def pde_residual_sum(a, u: MultiPoly) -> MultiPoly:
    """Summed operator applied to ``u(x1..x_{n-1})``."""
    a = _params(a).a
    m = len(a) - 1
    _check_arity(u, m)
    an = a[-1]
    head = sum(a[:-1])
    xs = MultiPoly.variables(m)
    d1, d2 = _derivs(u)
    r = MultiPoly.zero(m)
    for i in range(m):
        r = r + xs[i] * (1 - xs[i]) * d2[i][i]
        for j in range(m):
            if j != i:
                r = r - xs[i] * xs[j] * d2[i][j]
        r = r + (xs[i] * d1[i]).scale(head - an - 2)
        r = r - d1[i].scale(a[i])
    return r + u.scale((an + 1) * head)


def pde_residual_v(a, v: MultiPoly) -> MultiPoly:
    """Operator satisfied by f restricted to the simplex, in x1..x_{n-1}::

        sum x_i(1-x_i) d_i^2 v - 2 sum_{i<j} x_i x_j d_i d_j v + sum (|a| x_i - a_i) d_i v
    """
    a = _params(a).a
    m = len(a) - 1
    _check_arity(v, m)
    total = sum(a)
    xs = MultiPoly.variables(m)
    d1, d2 = _derivs(v)
    r = MultiPoly.zero(m)
    for i in range(m):
        r = r + xs[i] * (1 - xs[i]) * d2[i][i]
        for j in range(i + 1, m):
            r = r - (xs[i] * xs[j] * d2[i][j]).scale(2)
        r = r + (xs[i].scale(total) - a[i]) * d1[i]
    return r


def pde_residual_w(a, w: MultiPoly) -> MultiPoly:
    """Homogeneous operator in y1..yn::

        sum y_i(s - y_i) d_i^2 w - 2 sum_{i<j} y_i y_j d_i d_j w + sum (|a| y_i - a_i s) d_i w
    """
    a = _params(a).a
    n = len(a)
    _check_arity(w, n)
    total = sum(a)
    ys = MultiPoly.variables(n)
    s = sum(ys, MultiPoly.zero(n))
    d1, d2 = _derivs(w)
    r = MultiPoly.zero(n)
    for i in range(n):
        r = r + ys[i] * (s - ys[i]) * d2[i][i]
        for j in range(i + 1, n):
            r = r - (ys[i] * ys[j] * d2[i][j]).scale(2)
        r = r + (ys[i].scale(total) - s.scale(a[i])) * d1[i]
    return r


def permuted_v(a, sigma: Sequence[int]) -> MultiPoly:
    """``f_{a o sigma}(x o sigma)`` on the simplex, as a function of x1..x_{n-1}."""
    a = _params(a).a
    _check_perm(sigma, len(a))
    f = build_f(tuple(a[j] for j in sigma), homogeneous=False)
    images = simplex_images(len(a))
    return f.compose([images[j] for j in sigma])


def verify_permutation_pde(a, sigma: Sequence[int] | None = None) -> VerifyReport:
    a = _params(a).a
    sigma = tuple(range(len(a))) if sigma is None else tuple(sigma)
    with stopwatch() as t:
        residual = pde_residual_v(a, permuted_v(a, sigma))
    return exact_report("permutation-pde", {"a": list(a), "sigma": list(sigma)}, residual, t[0])


def verify_pde_suite(a) -> VerifyReport:
    """Every PDE claim for one parameter vector, in a single report."""
    a = _params(a).a
    n = len(a)
    with stopwatch() as t:
        residuals = []
        for sigma in itertools.permutations(range(n)):
            residuals.append(pde_residual_v(a, permuted_v(a, sigma)))
        table = lauricella_coeffs(a)
        closed = closed_form_table(a)
        u = table.as_poly()
        residuals.append(pde_residual_sum(a, u))
        residuals.append(pde_residual_w(a, build_f(a, True)))
        s = sum(MultiPoly.variables(n), MultiPoly.zero(n))
        residuals.append(pde_residual_w(a, s ** (sum(a) + 1)))
        residuals.append(u - closed.as_poly())
    return exact_report("pde", {"a": list(a)}, residuals, t[0])
