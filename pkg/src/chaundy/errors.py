"""Exception types shared across the package."""


class UsageError(ValueError):
    """Bad arguments: arity mismatch, index out of range, invalid parameters."""


class DomainError(ValueError):
    """Argument outside the domain where a function is defined."""


class BranchCutError(DomainError):
    """Non-terminating 2F1 requested on the cut [1, inf)."""


class PoleError(DomainError):
    """Evaluation at a pole (Gamma at a nonpositive integer, 2F1 with bad c)."""


class UndefinedOrderError(ValueError):
    """Root order asked of the zero polynomial."""


class NumericalError(ArithmeticError):
    """A floating-point computation produced NaN or infinity."""
