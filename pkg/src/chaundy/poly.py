"""Sparse exact multivariate polynomials.

A :class:`MultiPoly` maps exponent tuples to nonzero rational coefficients.
Coefficients are ints or Fractions; a Fraction with denominator 1 is always
stored as an int, so equal polynomials have identical term dictionaries.

:class:`ScaledPoly` carries ``core(x) * x**-d0 * (1-x)**-d1`` for the one
variable rational functions that show up as ODE solutions.
"""
from __future__ import annotations

import operator
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import UndefinedOrderError, UsageError
from .exact import normalize

_add = operator.add


def _coerce_coeff(c):
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, (int, Fraction)):
        return normalize(c)
    raise TypeError(f"coefficients must be int or Fraction, got {type(c).__name__}")


def _order_key(exp):
    # graded, then lexicographic with x1 taking precedence
    return (sum(exp), tuple(-e for e in exp))


class MultiPoly:
    """Immutable sparse polynomial in ``arity`` variables over the rationals."""

    __slots__ = ("arity", "_terms", "_hash")

    def __init__(self, arity: int, terms: Mapping[Sequence[int], object] | None = None):
        if arity < 0:
            raise UsageError("arity must be nonnegative")
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != arity:
                raise UsageError(f"exponent {exp} does not have length {arity}")
            if any(e < 0 for e in exp):
                raise UsageError(f"negative exponent in {exp}")
            c = _coerce_coeff(c)
            if c:
                clean[exp] = normalize(clean.get(exp, 0) + c)
                if not clean[exp]:
                    del clean[exp]
        self.arity = arity
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, arity: int, terms: dict) -> "MultiPoly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.arity = arity
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "MultiPoly":
        return cls._raw(arity, {})

    @classmethod
    def constant(cls, c, arity: int) -> "MultiPoly":
        c = _coerce_coeff(c)
        return cls._raw(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def variable(cls, index: int, arity: int) -> "MultiPoly":
        if not 0 <= index < arity:
            raise UsageError(f"variable index {index} out of range for arity {arity}")
        exp = [0] * arity
        exp[index] = 1
        return cls._raw(arity, {tuple(exp): 1})

    @classmethod
    def variables(cls, arity: int) -> list["MultiPoly"]:
        return [cls.variable(i, arity) for i in range(arity)]

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "MultiPoly":
        return cls(len(exp), {tuple(exp): coeff})

    @classmethod
    def from_coefficients(cls, coeffs: Iterable) -> "MultiPoly":
        """Univariate polynomial ``sum coeffs[k] x**k``."""
        return cls(1, {(k,): c for k, c in enumerate(coeffs) if c})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple, object]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree(self, index: int = 0) -> int:
        self._check_index(index)
        return max((e[index] for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def coefficient(self, exp: Sequence[int]):
        return self._terms.get(tuple(exp), 0)

    def coefficients(self) -> list:
        """Dense coefficient list of a univariate polynomial, lowest first."""
        if self.arity != 1:
            raise UsageError("coefficients() needs a univariate polynomial")
        out = [0] * (self.degree(0) + 1)
        for (k,), c in self._terms.items():
            out[k] = c
        return out

    def sorted_terms(self) -> list[tuple[tuple, object]]:
        """Terms in canonical graded-lexicographic order (lowest degree first)."""
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]))

    def max_abs_coefficient(self):
        return max((abs(c) for c in self._terms.values()), default=0)

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.arity != self.arity:
                raise UsageError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.arity)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for exp, c in small.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = normalize(s)
            else:
                out.pop(exp, None)
        return MultiPoly._raw(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.arity, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(map(_add, e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return MultiPoly._raw(
            self.arity, {e: normalize(c) for e, c in out.items() if c}
        )

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        c = _coerce_coeff(c)
        if not c:
            return MultiPoly.zero(self.arity)
        return MultiPoly._raw(
            self.arity, {e: normalize(v * c) for e, v in self._terms.items()}
        )

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(Fraction(1) / c)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise UsageError("polynomial powers need a nonnegative integer exponent")
        result = MultiPoly.constant(1, self.arity)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exp: Sequence[int]) -> "MultiPoly":
        """Multiply by the monomial ``x**exp``."""
        exp = tuple(exp)
        if len(exp) != self.arity:
            raise UsageError("shift exponent has wrong length")
        return MultiPoly._raw(
            self.arity, {tuple(map(_add, e, exp)): c for e, c in self._terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.arity)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.arity == other.arity and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and composition -------------------------------------------

    def _check_index(self, index: int):
        if not 0 <= index < self.arity:
            raise UsageError(f"variable index {index} out of range for arity {self.arity}")

    def partial_derivative(self, index: int) -> "MultiPoly":
        self._check_index(index)
        out = {}
        for exp, c in self._terms.items():
            k = exp[index]
            if k:
                e = list(exp)
                e[index] = k - 1
                out[tuple(e)] = c * k
        return MultiPoly._raw(self.arity, out)

    def compose(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``images[i]`` for variable ``i`` (all images share one arity)."""
        if len(images) != self.arity:
            raise UsageError(f"need {self.arity} images, got {len(images)}")
        if not images:
            return self
        target = images[0].arity
        if any(im.arity != target for im in images):
            raise UsageError("images must all have the same arity")
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.constant(1, target)} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                # build on the largest cached power below k
                j = max(p for p in cache if p < k)
                cache[k] = power(i, j) * (images[i] ** (k - j) if k - j > 1 else images[i])
            return cache[k]

        acc: dict = {}
        for exp, c in self._terms.items():
            term = MultiPoly.constant(c, target)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            for e, v in term._terms.items():
                acc[e] = acc.get(e, 0) + v
        return MultiPoly._raw(target, {e: normalize(v) for e, v in acc.items() if v})

    def substitute(self, index: int, r: "MultiPoly") -> "MultiPoly":
        """Replace variable ``index`` by ``r`` (same arity as ``self``)."""
        self._check_index(index)
        if r.arity != self.arity:
            raise UsageError(f"replacement has arity {r.arity}, expected {self.arity}")
        images = MultiPoly.variables(self.arity)
        images[index] = r
        return self.compose(images)

    def rename(self, positions: Sequence[int], arity: int | None = None) -> "MultiPoly":
        """Send variable ``i`` to variable ``positions[i]`` of an ``arity``-variable ring."""
        arity = self.arity if arity is None else arity
        if len(positions) != self.arity or len(set(positions)) != len(positions):
            raise UsageError("positions must be distinct, one per variable")
        if any(not 0 <= p < arity for p in positions):
            raise UsageError("position out of range")
        out = {}
        for exp, c in self._terms.items():
            e = [0] * arity
            for i, k in enumerate(exp):
                e[positions[i]] = k
            out[tuple(e)] = c
        return MultiPoly._raw(arity, out)

    def evaluate(self, point: Sequence):
        """Evaluate at ``point``; exact when the point is rational."""
        if len(point) != self.arity:
            raise UsageError(f"point has length {len(point)}, expected {self.arity}")
        total = 0
        for exp, c in self._terms.items():
            t = c
            for v, k in zip(point, exp):
                if k:
                    t = t * v**k
            total = total + t
        return normalize(total) if isinstance(total, Fraction) else total

    def __call__(self, *point):
        return self.evaluate(point)

    # -- univariate helpers -------------------------------------------------

    def divide_linear(self, at) -> tuple["MultiPoly", object]:
        """Synthetic division by ``(x - at)``: returns (quotient, remainder)."""
        if self.arity != 1:
            raise UsageError("divide_linear needs a univariate polynomial")
        coeffs = self.coefficients()
        if not coeffs:
            return MultiPoly.zero(1), 0
        q = [0] * (len(coeffs) - 1)
        carry = 0
        for k in range(len(coeffs) - 1, 0, -1):
            carry = coeffs[k] + carry * at
            q[k - 1] = carry
        rem = coeffs[0] + carry * at
        return MultiPoly.from_coefficients(q), normalize(Fraction(rem))

    # -- rendering ----------------------------------------------------------

    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names else _default_names(self.arity)
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, exp) if k
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_latex(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names else _default_latex_names(self.arity)
        if not self._terms:
            return "0"
        pieces = []
        for idx, (exp, c) in enumerate(self.sorted_terms()):
            mono = "".join(
                n if k == 1 else f"{n}^{{{k}}}" for n, k in zip(names, exp) if k
            )
            mag = abs(c)
            if isinstance(mag, Fraction):
                num = rf"\frac{{{mag.numerator}}}{{{mag.denominator}}}"
            else:
                num = str(mag)
            if mono:
                body = mono if mag == 1 else f"{num}{mono}"
            else:
                body = num
            if idx == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append(("- " if c < 0 else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self):
        return f"MultiPoly({self.arity}, {self.to_text()!r})"

    def __str__(self):
        return self.to_text()


def _default_names(arity: int) -> list[str]:
    if arity == 1:
        return ["x"]
    if arity == 2:
        return ["x", "y"]
    return [f"x{i + 1}" for i in range(arity)]


def _default_latex_names(arity: int) -> list[str]:
    if arity <= 2:
        return _default_names(arity)
    return [f"x_{{{i + 1}}}" for i in range(arity)]


X = MultiPoly.variable(0, 1)
ONE = MultiPoly.constant(1, 1)
ONE_MINUS_X = ONE - X


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.arity != q.arity:
        raise UsageError(f"arity mismatch: {p.arity} vs {q.arity}")
    return p * q


def substitute(p: MultiPoly, index: int, r: MultiPoly) -> MultiPoly:
    return p.substitute(index, r)


def partial_derivative(p: MultiPoly, index: int) -> MultiPoly:
    return p.partial_derivative(index)


def evaluate(p: MultiPoly, point: Sequence):
    return p.evaluate(point)


def root_order(p: MultiPoly, at) -> int:
    """Multiplicity of ``at`` as a root of the univariate polynomial ``p``."""
    if p.arity != 1:
        raise UsageError("root_order needs a univariate polynomial")
    if p.is_zero():
        raise UndefinedOrderError("the zero polynomial has no finite root order")
    order = 0
    while True:
        q, r = p.divide_linear(at)
        if r != 0:
            return order
        p = q
        order += 1


class ScaledPoly:
    """``core(x) * x**-d0 * (1-x)**-d1`` with ``core`` univariate.

    Stored normalized: when ``d0 > 0`` the core does not vanish at 0, and when
    ``d1 > 0`` it does not vanish at 1.
    """

    __slots__ = ("core", "d0", "d1")

    def __init__(self, core: MultiPoly | int | Fraction, d0: int = 0, d1: int = 0):
        if not isinstance(core, MultiPoly):
            core = MultiPoly.constant(core, 1)
        if core.arity != 1:
            raise UsageError("ScaledPoly core must be univariate")
        if d0 < 0 or d1 < 0:
            raise UsageError("denominator exponents must be nonnegative")
        if core.is_zero():
            d0 = d1 = 0
        while d0 and core.coefficient((0,)) == 0:
            core = MultiPoly._raw(1, {(e - 1,): c for (e,), c in core._terms.items()})
            d0 -= 1
        while d1:
            q, r = core.divide_linear(1)
            if r != 0:
                break
            core = -q  # core = (x-1) q = (1-x)(-q)
            d1 -= 1
        self.core = core
        self.d0 = d0
        self.d1 = d1

    def _lift(self, other) -> "ScaledPoly":
        if isinstance(other, ScaledPoly):
            return other
        if isinstance(other, (MultiPoly, int, Fraction)):
            return ScaledPoly(other)
        return NotImplemented

    def numerator_over(self, d0: int, d1: int) -> MultiPoly:
        """Numerator of ``self`` written over ``x**d0 (1-x)**d1``."""
        if d0 < self.d0 or d1 < self.d1:
            raise UsageError("target denominator does not divide out")
        return self.core.shift((d0 - self.d0,)) * ONE_MINUS_X ** (d1 - self.d1)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d0, d1 = max(self.d0, other.d0), max(self.d1, other.d1)
        return ScaledPoly(self.numerator_over(d0, d1) + other.numerator_over(d0, d1), d0, d1)

    __radd__ = __add__

    def __neg__(self):
        return ScaledPoly(-self.core, self.d0, self.d1)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return ScaledPoly(self.core * other.core, self.d0 + other.d0, self.d1 + other.d1)

    __rmul__ = __mul__

    def derivative(self) -> "ScaledPoly":
        # (c x^-d0 (1-x)^-d1)' = [c' x(1-x) - d0 c (1-x) + d1 c x] x^-(d0+1) (1-x)^-(d1+1)
        c = self.core
        num = (
            c.partial_derivative(0) * X * ONE_MINUS_X
            - c.scale(self.d0) * ONE_MINUS_X
            + c.scale(self.d1) * X
        )
        return ScaledPoly(num, self.d0 + 1, self.d1 + 1)

    def is_zero(self) -> bool:
        return self.core.is_zero()

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return (self.core, self.d0, self.d1) == (other.core, other.d0, other.d1)

    def __hash__(self):
        return hash((self.core, self.d0, self.d1))

    def evaluate(self, x):
        value = self.core.evaluate((x,))
        if self.d0:
            value = value / x**self.d0
        if self.d1:
            value = value / (1 - x) ** self.d1
        return normalize(value) if isinstance(value, Fraction) else value

    def to_text(self) -> str:
        text = f"({self.core.to_text()})"
        if self.d0:
            text += f" * x^-{self.d0}"
        if self.d1:
            text += f" * (1 - x)^-{self.d1}"
        return text

    def __repr__(self):
        return f"ScaledPoly({self.to_text()})"
