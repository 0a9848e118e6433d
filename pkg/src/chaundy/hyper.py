"""Double-precision complex Gamma, Gauss 2F1 and incomplete beta.

2F1 evaluation order:

* terminating series are summed exactly (in rationals when every input is
  rational);
* ``|z| <= 1/2``: direct power series;
* otherwise the argument is moved to whichever of ``z/(z-1)``, ``1-z``,
  ``1/(1-z)`` has the smallest modulus (the latter two only when their
  connection formulas are non-degenerate);
* if none gets below ``_TRANSFORM_LIMIT`` the hypergeometric ODE is
  integrated by Taylor steps from a point where the series is cheap.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import BranchCutError, DomainError, NumericalError, PoleError, UsageError
from .exact import hyp2f1_coefficients, is_nonpositive_integer, pochhammer, terminating_length
from .report import VerifyReport, numeric_report, stopwatch

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)
_DIRECT_LIMIT = 0.5
_TRANSFORM_LIMIT = 0.8
_CANCEL_LIMIT = 1e3
_SERIES_TOL = 1e-17
_MAX_TERMS = 20000
UNIT_ROUNDOFF = 2.0**-53


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` / ``a-bi`` / ``bi`` / ``a`` (``j`` also accepted)."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    if not s:
        raise ValueError("empty complex literal")
    if s.endswith("j") and s[:-1] in ("", "+", "-"):
        s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError:
        pass
    # complex() rejects forms like "2+j"
    s = s.replace("+j", "+1j").replace("-j", "-1j")
    return complex(s)


def _finite(z: complex) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NumericalError(f"non-finite result {z!r}")
    return z


def _as_complex(v) -> complex:
    if isinstance(v, str):
        return parse_complex(v)
    return complex(v)


def _nearest_int(z: complex) -> int | None:
    if z.imag != 0:
        return None
    r = round(z.real)
    return r if z.real == r else None


def _sin_pi(z: complex) -> complex:
    # reduce by the nearest integer so sin(pi z) keeps relative accuracy near zeros
    k = round(z.real)
    s = cmath.sin(math.pi * (z - k))
    return -s if k % 2 else s


def _loggamma_right(z: complex) -> complex:
    """log Gamma for Re z >= 1/2 (Lanczos, g=7)."""
    z = z - 1
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma_complex(z) -> complex:
    """Gamma(z) for complex z; reflection handles ``Re z < 1/2``."""
    z = _as_complex(z)
    k = _nearest_int(z)
    if k is not None and k <= 0:
        raise PoleError(f"Gamma has a pole at {k}")
    if k is not None and k <= 171:
        return complex(math.factorial(k - 1)) if k <= 30 else complex(math.gamma(k))
    if z.real < 0.5:
        return _finite(math.pi / (_sin_pi(z) * gamma_complex(1 - z)))
    return _finite(cmath.exp(_loggamma_right(z)))


def rgamma(z) -> complex:
    """1/Gamma(z), zero at the poles."""
    z = _as_complex(z)
    k = _nearest_int(z)
    if k is not None and k <= 0:
        return 0j
    if z.real < 0.5:
        return _finite(_sin_pi(z) * gamma_complex(1 - z) / math.pi)
    return 1 / gamma_complex(z)


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


def hyp2f1_exact(a, b, c, z) -> Fraction:
    """Terminating 2F1 in exact rationals."""
    a, b, c, z = (Fraction(v) for v in (a, b, c, z))
    length = terminating_length(a, b)
    if length is None:
        raise UsageError("exact evaluation needs a terminating series")
    try:
        coeffs = hyp2f1_coefficients(a, b, c, length)
    except ZeroDivisionError:
        raise PoleError(f"lower parameter {c} is a pole before the series terminates")
    total = Fraction(0)
    for coeff in reversed(coeffs):
        total = total * z + coeff
    return total


def _terminating(a, b, c, z: complex, length: int) -> complex:
    try:
        coeffs = hyp2f1_coefficients(complex(a), complex(b), complex(c), length)
    except ZeroDivisionError:
        raise PoleError(f"lower parameter {c} is a pole before the series terminates")
    total = 0j
    for coeff in reversed(coeffs):
        total = total * z + coeff
    return total


def _series_mag(a: complex, b: complex, c: complex, z: complex) -> tuple[complex, float]:
    """Direct series and the sum of the moduli of its terms."""
    term = 1 + 0j
    total = 1 + 0j
    mag = 1.0
    small = 0
    for k in range(_MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        mag += abs(term)
        if term == 0:
            return total, mag
        if abs(term) <= _SERIES_TOL * abs(total):
            small += 1
            if small >= 2:
                return total, mag
        else:
            small = 0
    raise NumericalError(f"2F1 series did not converge at z={z!r}")


def _series(a: complex, b: complex, c: complex, z: complex) -> complex:
    return _series_mag(a, b, c, z)[0]


def _is_integer(v: complex) -> bool:
    return v.imag == 0 and float(v.real).is_integer()


# Each transform returns (value, magnitude); magnitude / |value| measures
# the cancellation suffered, so roughly eps times it is the relative error.
def _pfaff(a, b, c, z):
    pre = (1 - z) ** (-a)
    value, mag = _series_mag(a, c - b, c, z / (z - 1))
    return pre * value, abs(pre) * mag


def _one_minus(a, b, c, z):
    w = 1 - z
    first = gamma_complex(c) * gamma_complex(c - a - b) * rgamma(c - a) * rgamma(c - b)
    second = gamma_complex(c) * gamma_complex(a + b - c) * rgamma(a) * rgamma(b)
    out, mag = 0j, 0.0
    if first:
        value, size = _series_mag(a, b, a + b - c + 1, w)
        out += first * value
        mag += abs(first) * size
    if second:
        pre = second * w ** (c - a - b)
        value, size = _series_mag(c - a, c - b, c - a - b + 1, w)
        out += pre * value
        mag += abs(pre) * size
    return out, mag


def _inverse_one_minus(a, b, c, z):
    w = 1 / (1 - z)
    first = gamma_complex(c) * gamma_complex(b - a) * rgamma(b) * rgamma(c - a)
    second = gamma_complex(c) * gamma_complex(a - b) * rgamma(a) * rgamma(c - b)
    out, mag = 0j, 0.0
    if first:
        pre = first * (1 - z) ** (-a)
        value, size = _series_mag(a, c - b, a - b + 1, w)
        out += pre * value
        mag += abs(pre) * size
    if second:
        pre = second * (1 - z) ** (-b)
        value, size = _series_mag(b, c - a, b - a + 1, w)
        out += pre * value
        mag += abs(pre) * size
    return out, mag


def _taylor_step(a, b, c, z0, y, dy, h):
    """Advance (y, y') of the hypergeometric ODE from z0 to z0 + h."""
    p0 = z0 * (1 - z0)
    p1 = 1 - 2 * z0
    q0 = c - (a + b + 1) * z0
    q1 = -(a + b + 1)
    r = -a * b
    prev, cur = y, dy  # y_k, y_{k+1}
    val = y + dy * h
    der = dy
    hk = h  # h**(k+1)
    small = 0
    for k in range(_MAX_TERMS):
        nxt = -((p1 * k * (k + 1) + q0 * (k + 1)) * cur + (-k * (k - 1) + q1 * k + r) * prev) / (
            p0 * (k + 1) * (k + 2)
        )
        dterm = (k + 2) * nxt * hk
        der += dterm
        hk *= h
        term = nxt * hk
        val += term
        if abs(term) <= _SERIES_TOL * abs(val) and abs(dterm) <= _SERIES_TOL * abs(der):
            small += 1
            if small >= 3:
                return val, der
        else:
            small = 0
        prev, cur = cur, nxt
    raise NumericalError("Taylor continuation did not converge")


def _segment_distance(p: complex, q: complex, point: complex) -> float:
    d = q - p
    if d == 0:
        return abs(point - p)
    t = max(0.0, min(1.0, ((point - p) * d.conjugate()).real / abs(d) ** 2))
    return abs(p + t * d - point)


def _continuation_path(start: complex, z: complex) -> list[complex]:
    """Waypoints from ``start`` to ``z`` that keep clear of the singular point 1."""
    clearance = 0.6
    if abs(z - 1) <= clearance or _segment_distance(start, z, 1) >= 0.75 * clearance:
        return [z]
    # arc of radius `clearance` about 1, on the side of z, ending towards z
    begin = cmath.phase(start - 1)
    end = cmath.phase(z - 1)
    if z.imag < 0 or (z.imag == 0 and z.real < 1 and start.imag < 0):
        begin = -abs(begin)
        end = end if end < 0 else end - 2 * math.pi
    else:
        begin = abs(begin)
        end = end if end >= 0 else end + 2 * math.pi
    pieces = max(2, int(abs(end - begin) / (math.pi / 8)) + 1)
    arc = [1 + clearance * cmath.exp(1j * (begin + (end - begin) * k / pieces))
           for k in range(pieces + 1)]
    return arc + [z]


def _ode_continue(a, b, c, z):
    start = z * (0.4 / abs(z))
    y = _series(a, b, c, start)
    dy = a * b / c * _series(a + 1, b + 1, c + 1, start)
    z0 = start
    steps = 0
    for target in _continuation_path(start, z):
        while z0 != target:
            gap = target - z0
            radius = min(abs(z0), abs(1 - z0))
            if abs(gap) <= 0.5 * radius:
                h, nxt = gap, target
            else:
                h = gap / abs(gap) * 0.5 * radius
                nxt = z0 + h
            y, dy = _taylor_step(a, b, c, z0, y, dy, h)
            z0 = nxt
            steps += 1
            if steps > 10000:
                raise NumericalError("analytic continuation took too many steps")
    return y


_TRANSFORMS = {
    "pfaff": _pfaff,
    "one-minus": _one_minus,
    "inverse-one-minus": _inverse_one_minus,
}


def _transform_choice(a, b, c, z) -> str | None:
    candidates = [("pfaff", abs(z / (z - 1)))]
    if not _is_integer(c - a - b):
        candidates.append(("one-minus", abs(1 - z)))
    if not _is_integer(a - b):
        candidates.append(("inverse-one-minus", abs(1 / (1 - z))))
    name, modulus = min(candidates, key=lambda t: t[1])
    return name if modulus <= _TRANSFORM_LIMIT else None


def _evaluate(a, b, c, z) -> tuple[str, complex]:
    """Non-terminating 2F1 off the cut, with the route that produced it."""
    if z == 0:
        return "direct", 1 + 0j
    if abs(z) <= _DIRECT_LIMIT:
        return "direct", _series(a, b, c, z)
    name = _transform_choice(a, b, c, z)
    if name is not None:
        value, mag = _TRANSFORMS[name](a, b, c, z)
        if mag <= _CANCEL_LIMIT * abs(value):
            return name, value
    # no transform converges fast enough, or the one that does cancels badly
    return "ode", _ode_continue(a, b, c, z)


def _prepare(a, b, c, z):
    a, b, c, z = (_as_complex(v) for v in (a, b, c, z))
    length = terminating_length(a, b)
    if length is None:
        if is_nonpositive_integer(c):
            raise PoleError(f"lower parameter {c} is a nonpositive integer")
        if z.imag == 0 and z.real >= 1:
            raise BranchCutError(f"z={z!r} lies on the branch cut [1, inf)")
    return a, b, c, z, length


def hyp2f1_route(a, b, c, z) -> str:
    """Name of the evaluation path :func:`hyp2f1` takes for these inputs."""
    a, b, c, z, length = _prepare(a, b, c, z)
    if length is not None:
        return "terminating"
    return _evaluate(a, b, c, z)[0]


def hyp2f1(a, b, c, z) -> complex:
    """Gauss 2F1(a, b; c; z) with analytic continuation to C minus [1, inf)."""
    if _is_exact(a, b, c, z) and terminating_length(a, b) is not None:
        return complex(hyp2f1_exact(a, b, c, z))
    a, b, c, z, length = _prepare(a, b, c, z)
    if length is not None:
        return _finite(_terminating(a, b, c, z, length))
    return _finite(_evaluate(a, b, c, z)[1])


# -- incomplete beta and the complex-parameter extension ---------------------


def _check_unit_interval(x, closed: bool = False) -> float:
    x = float(x)
    ok = 0 <= x <= 1 if closed else 0 < x < 1
    if not ok:
        raise DomainError(f"x={x!r} outside {'[0,1]' if closed else '(0,1)'}")
    return x


def incomplete_beta(x, p, q) -> complex:
    """``B_x(p, q) = x**p / p * 2F1(1-q, p; p+1; x)`` for Re p > 0."""
    x = _check_unit_interval(x, closed=True)
    p, q = _as_complex(p), _as_complex(q)
    if p.real <= 0:
        raise DomainError("incomplete beta needs Re p > 0")
    if x == 0:
        return 0j
    if x == 1:
        if q.real <= 0:
            raise DomainError("complete beta needs Re q > 0")
        return _finite(gamma_complex(p) * gamma_complex(q) * rgamma(p + q))
    return _finite(x**p / p * hyp2f1(1 - q, p, p + 1, x))


def incomplete_beta_exact(x, p: int, q: int) -> Fraction:
    """Exact ``B_x(p, q)`` for positive integers p, q and rational x."""
    if p < 1 or q < 1:
        raise DomainError("exact incomplete beta needs positive integer p, q")
    x = Fraction(x)
    return x**p / p * hyp2f1_exact(1 - q, p, p + 1, x)


@dataclass(frozen=True)
class ExtensionParams:
    m: complex
    n: complex
    x: float

    def __post_init__(self):
        object.__setattr__(self, "m", _as_complex(self.m))
        object.__setattr__(self, "n", _as_complex(self.n))
        object.__setattr__(self, "x", float(self.x))
        if self.m.real <= -1 or self.n.real <= -1:
            raise DomainError("need Re m > -1 and Re n > -1")
        _check_unit_interval(self.x)


def _beta_ratio(m: complex, n: complex) -> complex:
    return gamma_complex(m + n + 2) * rgamma(m + 1) * rgamma(n + 1)


def extended_p(params: ExtensionParams) -> complex:
    """``Gamma(m+n+2)/(Gamma(m+1)Gamma(n+1)) * B_{1-x}(n+1, m+1)``."""
    m, n, x = params.m, params.n, params.x
    return _finite(_beta_ratio(m, n) * incomplete_beta(1 - x, n + 1, m + 1))


def extended_p_complement(params: ExtensionParams) -> complex:
    """The other extension: ``1 - Gamma(m+n+2)/(Gamma(m+1)Gamma(n+1)) * B_x(m+1, n+1)``."""
    m, n, x = params.m, params.n, params.x
    return _finite(1 - _beta_ratio(m, n) * incomplete_beta(x, m + 1, n + 1))


def verify_extension_equivalence(params: ExtensionParams, tol: float = 1e-9) -> VerifyReport:
    with stopwatch() as t:
        a = extended_p(params)
        b = extended_p_complement(params)
        rel = abs(a - b) / max(abs(a), abs(b))
    return numeric_report("extension", {"m": params.m, "n": params.n, "x": params.x}, rel, tol,
                          t[0], {"p120": a, "p123": b})


def verify_extension_unity(params: ExtensionParams, tol: float = 1e-9) -> VerifyReport:
    """``p(m,n)(x) + p(n,m)(1-x) = 1`` for the extended p."""
    swapped = ExtensionParams(params.n, params.m, 1 - params.x)
    with stopwatch() as t:
        residual = abs(extended_p(params) + extended_p(swapped) - 1)
    return numeric_report("extension-unity", {"m": params.m, "n": params.n, "x": params.x},
                          residual, tol, t[0])


# -- three-term identity -----------------------------------------------------


@dataclass(frozen=True)
class ThreeTermParams:
    alpha: float
    m: int
    n: int
    z: complex

    def __post_init__(self):
        object.__setattr__(self, "z", _as_complex(self.z))
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")
        if self.m < 0 or self.n < 0:
            raise UsageError("m and n must be nonnegative integers")
        z = self.z
        if z.imag == 0 and 0 <= z.real <= 1:
            raise DomainError("z must lie off the segment [0, 1]")


def _prefactor(alpha: float, n: int, z: complex) -> complex:
    return (1 - z) ** (-n - 1) * (1 - 1 / z) ** (-alpha)


# Exact Gaussian rationals as (re, im) pairs.  A double is a dyadic rational,
# so the polynomial parts of the identity can be summed without roundoff.
def _gauss(z: complex) -> tuple[Fraction, Fraction]:
    return Fraction(z.real), Fraction(z.imag)


def _gmul(p, q):
    return p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0]


def _gpow(p, k: int):
    if k < 0:
        norm = p[0] ** 2 + p[1] ** 2
        p, k = (p[0] / norm, -p[1] / norm), -k
    out = (Fraction(1), Fraction(0))
    for _ in range(k):
        out = _gmul(out, p)
    return out


def _gpoly(coeffs, p):
    total = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        total = _gmul(total, p)
        total = (total[0] + c, total[1])
    return total


def _gfloat(p) -> complex:
    return complex(float(p[0]), float(p[1]))


def threeterm_terms(params: ThreeTermParams) -> tuple[complex, complex, complex]:
    """(left side, first right term, second right term).

    The terminating sums and the integer powers of ``z`` and ``1 - z`` are
    exact; only ``(1 - 1/z)**-alpha`` and the left 2F1 are rounded.
    """
    al, m, n, z = params.alpha, params.m, params.n, params.z
    aq = Fraction(al)
    zq = _gauss(z)
    base = _gpow((1 - zq[0], -zq[1]), -n - 1)
    twist = (1 - 1 / z) ** (-al)
    lhs = _gfloat(base) * twist * hyp2f1(m + 1, -al, n + m + 2, 1 / z)
    f1 = _gpoly(hyp2f1_coefficients(-n, m + 1, -n - aq, n + 1), (1 - zq[0], -zq[1]))
    c1 = pochhammer(n + 1, m + 1) / pochhammer(n + aq + 1, m + 1)
    e1 = _gmul(_gmul(_gpow(zq, m + 1), base), f1)
    rhs1 = twist * _gfloat((c1 * e1[0], c1 * e1[1]))
    f2 = _gpoly(hyp2f1_coefficients(-m, n + 1, -m - aq, m + 1), zq)
    c2 = pochhammer(m + 1, n + 1) / pochhammer(m + aq + 1, n + 1)
    rhs2 = _gfloat((c2 * f2[0], c2 * f2[1]))
    return lhs, rhs1, rhs2


def branch_consistency(alpha: float, n: int, z) -> float:
    """|(1-z)^(-n-1)(1-1/z)^(-a) - (-1)^(n+1) z^(-n-1) (1-1/z)^(-a-n-1)| relative."""
    z = _as_complex(z)
    one = _prefactor(alpha, n, z)
    two = (-1) ** (n + 1) * z ** (-n - 1) * (1 - 1 / z) ** (-alpha - n - 1)
    return abs(one - two) / abs(one)


def verify_threeterm(params: ThreeTermParams, tol: float = 1e-8) -> VerifyReport:
    if params.z == 0:
        raise DomainError("z must be nonzero")
    with stopwatch() as t:
        lhs, rhs1, rhs2 = threeterm_terms(params)
        rel = abs(lhs - rhs1 - rhs2) / abs(lhs)
    return numeric_report(
        "threeterm",
        {"alpha": params.alpha, "m": params.m, "n": params.n, "z": params.z},
        rel, tol, t[0], {"lhs": lhs, "rhs": rhs1 + rhs2},
    )


def _fd_residual(u: Callable[[complex], complex], alpha, m, n, z) -> float:
    # First derivative: two-point central difference at the cube-root step.
    # Second derivative: five-point fourth-order central stencil with a
    # larger step, scaled by the distance to the nearer singular point, since
    # a two-point second difference drowns in roundoff here.
    h1 = UNIT_ROUNDOFF ** (1 / 3) * abs(z)
    h2 = UNIT_ROUNDOFF ** (1 / 6) * min(abs(z), abs(1 - z))
    mid = u(z)
    d1 = (u(z + h1) - u(z - h1)) / (2 * h1)
    d2 = (-u(z + 2 * h2) + 16 * u(z + h2) - 30 * mid + 16 * u(z - h2) - u(z - 2 * h2)) / (
        12 * h2 * h2
    )
    t1 = z * (1 - z) * d2
    t2 = ((n + 2) * z + m * (1 - z) + alpha) * d1
    t3 = m * (n + 1) * mid
    return abs(t1 - t2 + t3) / max(abs(t1), abs(t2), abs(t3))


def verify_ode_numeric(params: ThreeTermParams, tol: float = 1e-5) -> VerifyReport:
    """Each of the three terms solves the hypergeometric ODE with c = -m - alpha."""
    al, m, n = params.alpha, params.m, params.n

    def term(index):
        return lambda w: threeterm_terms(ThreeTermParams(al, m, n, w))[index]

    with stopwatch() as t:
        residuals = [_fd_residual(term(i), al, m, n, params.z) for i in range(2)]
        # with m = 0 the last term is a constant and the equation has no
        # undifferentiated part, so it holds exactly
        residuals.append(0.0 if m == 0 else _fd_residual(term(2), al, m, n, params.z))
    return numeric_report(
        "ode-numeric",
        {"alpha": al, "m": m, "n": n, "z": params.z},
        max(residuals), tol, t[0], {"per_term": residuals},
    )


def verify_ode_limit(m: int, n: int) -> VerifyReport:
    """The alpha -> 0 surrogate: exact check of the degenerate ODE."""
    from .onevar import verify_ode_onevar

    return verify_ode_onevar(m, n)
