"""One-variable partition-of-unity polynomials and their exact checks.

``p(m, n)(x) = (1-x)**(n+1) * sum_{k<=m} C(n+k, k) x**k`` and the identity
``p(m, n)(x) + p(n, m)(1-x) = 1`` are verified here by every construction
route: closed form, the two-index recurrence, the generating function,
the homogeneous binomial split, the derivative descent and the degenerate
hypergeometric ODE.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import UsageError
from .exact import binomial, factorial, hyp2f1_coefficients, pochhammer, terminating_length
from .poly import ONE, ONE_MINUS_X, X, MultiPoly, ScaledPoly, root_order
from .report import VerifyReport, exact_report, stopwatch

_XY = MultiPoly.variables(2)


@dataclass(frozen=True)
class OneVarParams:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise UsageError("m and n must be nonnegative")


def _check_mn(m: int, n: int):
    if m < 0 or n < 0:
        raise UsageError("m and n must be nonnegative")


def truncated_binomial_series(m: int, n: int) -> MultiPoly:
    """``sum_{k<=m} C(n+k, k) x**k``, the head of ``(1-x)**-(n+1)``."""
    return MultiPoly.from_coefficients(binomial(n + k, k) for k in range(m + 1))


def reflect(p: MultiPoly) -> MultiPoly:
    """``p(1 - x)``."""
    return p.substitute(0, ONE_MINUS_X)


@lru_cache(maxsize=None)
def build_p(m: int, n: int) -> MultiPoly:
    _check_mn(m, n)
    return ONE_MINUS_X ** (n + 1) * truncated_binomial_series(m, n)


@lru_cache(maxsize=None)
def build_p_recur(m: int, n: int) -> MultiPoly:
    """Same polynomial via ``p(m,n) = x p(m-1,n) + (1-x) p(m,n-1)``."""
    _check_mn(m, n)
    if n == 0:
        return ONE - X ** (m + 1)
    if m == 0:
        return ONE_MINUS_X ** (n + 1)
    return X * build_p_recur(m - 1, n) + ONE_MINUS_X * build_p_recur(m, n - 1)


def build_P_hom(m: int, n: int) -> MultiPoly:
    """``sum_{k<=m} C(m+n+1, k) x**k y**(m-k)`` in variables (x, y)."""
    _check_mn(m, n)
    return MultiPoly(2, {(k, m - k): binomial(m + n + 1, k) for k in range(m + 1)})


def genfun_coeff(m: int, n: int) -> MultiPoly:
    """Coefficient of ``u**m v**n`` in ``(1-x) / ((1-u)(1 - u x - v(1-x)))``.

    ``1/(1 - u x - v(1-x)) = sum c[i][j] u**i v**j`` with
    ``c[i][j] = x c[i-1][j] + (1-x) c[i][j-1]``; the factor ``1/(1-u)``
    turns that into a running sum over ``i``.
    """
    _check_mn(m, n)
    c = [[MultiPoly.zero(1)] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                c[i][j] = ONE
                continue
            acc = MultiPoly.zero(1)
            if i:
                acc = acc + X * c[i - 1][j]
            if j:
                acc = acc + ONE_MINUS_X * c[i][j - 1]
            c[i][j] = acc
    total = MultiPoly.zero(1)
    for i in range(m + 1):
        total = total + c[i][n]
    return ONE_MINUS_X * total


def verify_onevar(m: int, n: int, perturb: Fraction | int = 0) -> VerifyReport:
    """Exact check of ``p(m,n)(x) + p(n,m)(1-x) = 1``.

    ``perturb`` is added to the constant term of ``p(m,n)``; it exists only as
    a negative control for the reporting path.
    """
    with stopwatch() as t:
        p = build_p(m, n)
        if perturb:
            p = p + perturb
        residual = p + reflect(build_p(n, m)) - 1
    return exact_report("onevar", {"m": m, "n": n}, residual, t[0])


def verify_homogeneous(m: int, n: int) -> VerifyReport:
    """Homogeneous form in (x, y) plus the binomial split through ``P_hom``."""
    _check_mn(m, n)
    with stopwatch() as t:
        x, y = _XY
        s = x + y
        lhs = s ** (m + n + 1)
        first = MultiPoly.zero(2)
        for k in range(m + 1):
            coeff = Fraction(pochhammer(n + 1, k), factorial(k))
            first = first + (x**k * s ** (m - k)).scale(coeff)
        second = MultiPoly.zero(2)
        for k in range(n + 1):
            coeff = Fraction(pochhammer(m + 1, k), factorial(k))
            second = second + (y**k * s ** (n - k)).scale(coeff)
        homogeneous = lhs - y ** (n + 1) * first - x ** (m + 1) * second
        swapped = build_P_hom(n, m).rename((1, 0))  # P(n,m)(y, x)
        split = lhs - y ** (n + 1) * build_P_hom(m, n) - x ** (m + 1) * swapped
    return exact_report("homogeneous", {"m": m, "n": n}, [homogeneous, split], t[0])


def specialize_split(m: int, n: int) -> MultiPoly:
    """``(1-x)**(n+1) P(m,n)(x,1-x) + x**(m+1) P(n,m)(1-x,x)`` as a polynomial in x."""
    images = [X, ONE_MINUS_X]
    first = build_P_hom(m, n).compose(images)
    second = build_P_hom(n, m).compose([ONE_MINUS_X, X])
    return ONE_MINUS_X ** (n + 1) * first + X ** (m + 1) * second


def verify_truncation(m: int, n: int) -> VerifyReport:
    """``P(m,n)(x, 1-x)`` equals the truncated series of ``(1-x)**-(n+1)``."""
    _check_mn(m, n)
    with stopwatch() as t:
        lhs = build_P_hom(m, n).compose([X, ONE_MINUS_X])
        residual = lhs - truncated_binomial_series(m, n)
    return exact_report("truncation", {"m": m, "n": n}, residual, t[0])


def identity_one_rhs(m: int, n: int) -> ScaledPoly:
    """Right side of ``(1-x)**-(n+1) = u1 + u2`` as a ScaledPoly."""
    return ScaledPoly(u1_poly(m, n)) + u2_scaled(m, n)


def descent_expr13(m: int, n: int) -> ScaledPoly:
    total = ScaledPoly(0)
    for k in range(n + 1):
        base = Fraction(pochhammer(m + 1, k), factorial(k))
        a = base * Fraction(m + 1, n + 1)
        b = base * Fraction(n - k + 1, n + 1)
        total = total + ScaledPoly((X**m * ONE_MINUS_X**k).scale(a), 0, n + 1)
        total = total + ScaledPoly((X ** (m + 1) * ONE_MINUS_X**k).scale(b), 0, n + 2)
    return total


def descent_expr14(m: int, n: int) -> ScaledPoly:
    total = ScaledPoly(0)
    for k in range(n + 2):
        coeff = Fraction(pochhammer(m, k), factorial(k))
        total = total + ScaledPoly((X**m * ONE_MINUS_X**k).scale(coeff), 0, n + 2)
    return total


def verify_derivative_descent(m: int, n: int) -> VerifyReport:
    """One induction step of the repeated-differentiation proof.

    Checks that the two tail expressions agree, and that ``(n+1)**-1 d/dx``
    applied to the right side for (m, n) gives the right side for (m-1, n+1).
    """
    if m < 1:
        raise UsageError("derivative descent needs m >= 1")
    _check_mn(m, n)
    with stopwatch() as t:
        tails = descent_expr13(m, n) - descent_expr14(m, n)
        lowered = identity_one_rhs(m, n).derivative() * Fraction(1, n + 1)
        step = lowered - identity_one_rhs(m - 1, n + 1)
    return exact_report("descent", {"m": m, "n": n}, [tails, step], t[0])


def hyp2f1_poly(a, b, c, arg: MultiPoly = X) -> MultiPoly:
    """Terminating 2F1(a, b; c; arg) as an exact polynomial."""
    length = terminating_length(a, b)
    if length is None:
        raise UsageError("hyp2f1_poly needs a terminating series")
    coeffs = hyp2f1_coefficients(Fraction(a), Fraction(b), Fraction(c), length)
    total = MultiPoly.zero(arg.arity)
    power = MultiPoly.constant(1, arg.arity)
    for k, coeff in enumerate(coeffs):
        if k:
            power = power * arg
        total = total + power.scale(coeff)
    return total


def u1_poly(m: int, n: int) -> MultiPoly:
    return MultiPoly.from_coefficients(
        Fraction(pochhammer(n + 1, k), factorial(k)) for k in range(m + 1)
    )


def u2_scaled(m: int, n: int) -> ScaledPoly:
    core = MultiPoly.zero(1)
    for k in range(n + 1):
        coeff = Fraction(pochhammer(m + 1, k), factorial(k))
        core = core + (X ** (m + 1) * ONE_MINUS_X**k).scale(coeff)
    return ScaledPoly(core, 0, n + 1)


def u3_scaled(m: int, n: int) -> ScaledPoly:
    return ScaledPoly(ONE, 0, n + 1)


def ode_residual(m: int, n: int, u) -> ScaledPoly:
    """``x(1-x)u'' - ((n+2)x + m(1-x))u' + m(n+1)u`` for a ScaledPoly ``u``."""
    if isinstance(u, MultiPoly):
        u = ScaledPoly(u)
    du = u.derivative()
    d2u = du.derivative()
    return (
        ScaledPoly(X * ONE_MINUS_X) * d2u
        - ScaledPoly(X.scale(n + 2) + ONE_MINUS_X.scale(m)) * du
        + u * (m * (n + 1))
    )


def verify_ode_onevar(m: int, n: int) -> VerifyReport:
    """All three solutions solve the degenerate hypergeometric ODE; u3 = u1 + u2.

    Also checks the hypergeometric forms of u1, u2, u3, including the
    constant ``(m+n+1)! / ((m+1)! n!)`` in front of 2F1(m+1, -n; m+2; x).
    """
    _check_mn(m, n)
    with stopwatch() as t:
        u1, u2, u3 = ScaledPoly(u1_poly(m, n)), u2_scaled(m, n), u3_scaled(m, n)
        residuals = [ode_residual(m, n, u) for u in (u1, u2, u3)]
        residuals.append(u3 - u1 - u2)
        residuals.append(u1 - ScaledPoly(hyp2f1_poly(-m, n + 1, -m)))
        xm = X ** (m + 1)
        residuals.append(u2 - ScaledPoly(xm * hyp2f1_poly(-n, m + 1, -n, ONE_MINUS_X), 0, n + 1))
        const = Fraction(factorial(m + n + 1), factorial(m + 1) * factorial(n))
        residuals.append(u2 - ScaledPoly((xm * hyp2f1_poly(m + 1, -n, m + 2)).scale(const), 0, n + 1))
        residuals.append(u3 - ScaledPoly(hyp2f1_poly(0, -m - n - 1, -n, ONE_MINUS_X), 0, n + 1))
    return exact_report("ode", {"m": m, "n": n}, residuals, t[0])


def _exact_quotient(p: MultiPoly, at, times: int) -> MultiPoly:
    for _ in range(times):
        p, r = p.divide_linear(at)
        if r != 0:
            raise ArithmeticError("division by linear factor left a remainder")
    return p


def bezout_certificate(m: int, n: int) -> tuple[MultiPoly, MultiPoly]:
    """Cofactors q, r with ``(1-x)**(n+1) q + x**(m+1) r = 1``, deg q <= m, deg r <= n."""
    _check_mn(m, n)
    # p = (1-x)^(n+1) q = (-1)^(n+1) (x-1)^(n+1) q
    q = _exact_quotient(build_p(m, n), 1, n + 1).scale((-1) ** (n + 1))
    r = _exact_quotient(reflect(build_p(n, m)), 0, m + 1)
    return q, r


def verify_bezout(m: int, n: int) -> VerifyReport:
    with stopwatch() as t:
        q, r = bezout_certificate(m, n)
        residual = ONE_MINUS_X ** (n + 1) * q + X ** (m + 1) * r - 1
        bad_degree = q.degree(0) > m or r.degree(0) > n
    report = exact_report("bezout", {"m": m, "n": n}, residual, t[0],
                          {"deg_q": q.degree(0), "deg_r": r.degree(0)})
    if bad_degree:
        report.status = "fail"
        report.witness = "cofactor degree bound violated"
    return report


def herrmann_orders(m: int, n: int) -> tuple[int, int]:
    """(order of the root of p at 1, order of the root of 1 - p at 0)."""
    p = build_p(m, n)
    return root_order(p, 1), root_order(ONE - p, 0)


def verify_pfaff_limit(m: int, n: int) -> VerifyReport:
    """``sum (n+1)_k/k! x^k = (1-x)^m sum (-m-n-1)_k/k! (x/(x-1))^k``, times (x-1)^m."""
    _check_mn(m, n)
    with stopwatch() as t:
        x_minus_1 = X - 1
        lhs = x_minus_1**m * u1_poly(m, n)
        rhs = MultiPoly.zero(1)
        for k in range(m + 1):
            coeff = Fraction(pochhammer(-m - n - 1, k), factorial(k))
            rhs = rhs + (X**k * x_minus_1 ** (m - k)).scale(coeff)
        rhs = ONE_MINUS_X**m * rhs
    return exact_report("pfaff-limit", {"m": m, "n": n}, lhs - rhs, t[0])


def chu_vandermonde_value(m: int, n: int) -> Fraction:
    """Exact terminating 2F1(-n, m+1; m+2; 1)."""
    return Fraction(sum(hyp2f1_coefficients(Fraction(-n), Fraction(m + 1), Fraction(m + 2), n + 1)))


def chu_vandermonde_closed(m: int, n: int) -> Fraction:
    return Fraction(factorial(n) * factorial(m + 1), factorial(m + n + 1))
