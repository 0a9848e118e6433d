"""Exact and numeric verification of the Chaundy-Bullard partition of unity
and its multivariable, hypergeometric and probabilistic relatives."""
from .errors import (
    BranchCutError,
    DomainError,
    NumericalError,
    PoleError,
    UndefinedOrderError,
    UsageError,
)
from .exact import BigRational, binomial, pochhammer, to_rational
from .hyper import extended_p, gamma_complex, hyp2f1, incomplete_beta
from .multivar import build_f, verify_cyclic
from .onevar import build_p, verify_onevar
from .paths import enumerate_weighted_paths, mc_coin_toss
from .poly import MultiPoly, ScaledPoly
from .report import VerifyReport
from .simplex import dirichlet, subsimplex_integral, verify_split

__version__ = "0.1.0"

__all__ = [
    "BigRational", "BranchCutError", "DomainError", "MultiPoly", "NumericalError",
    "PoleError", "ScaledPoly", "UndefinedOrderError", "UsageError", "VerifyReport",
    "binomial", "build_f", "build_p", "dirichlet", "enumerate_weighted_paths", "extended_p",
    "gamma_complex", "hyp2f1", "incomplete_beta", "mc_coin_toss", "pochhammer",
    "subsimplex_integral", "to_rational", "verify_cyclic", "verify_onevar", "verify_split",
]
