"""Exception types raised across the package."""


class ShiftLabError(Exception):
    """Base class for every error raised by shiftlab."""


class NotPrimeError(ShiftLabError, ValueError):
    pass


class FieldOverflowError(ShiftLabError, ValueError):
    """Modulus outside the supported range 2 < p < 2**62."""


class NotADivisorError(ShiftLabError, ValueError):
    pass


class ZeroRepError(ShiftLabError, ValueError):
    pass


class DuplicateCosetError(ShiftLabError, ValueError):
    pass


class FieldMismatchError(ShiftLabError, ValueError):
    pass


class BudgetExceededError(ShiftLabError, RuntimeError):
    """A configured work budget would be exceeded; nothing is truncated."""


class DegreeTooLargeError(ShiftLabError, ValueError):
    pass


class DegreeGuardViolatedError(ShiftLabError, ValueError):
    """Degrees are too large relative to p for a derivative-based criterion."""


class DuplicateAlphaError(ShiftLabError, ValueError):
    pass


class ZeroAlphaError(ShiftLabError, ValueError):
    pass


class ZeroShiftError(ShiftLabError, ValueError):
    pass


class ZeroPolynomialError(ShiftLabError, ValueError):
    pass


class HypothesisViolatedError(ShiftLabError, ValueError):
    """A parameter condition required by the Stepanov construction fails.

    ``condition`` names the failing inequality: ``"order_large"`` (k B^(2k) < t),
    ``"B_large"`` (t s < B^(2k+1)) or ``"p_large"`` (p >= (2kB + 2) t).
    """

    def __init__(self, condition, message):
        super().__init__(f"condition {condition} violated: {message}")
        self.condition = condition


class SystemInfeasibleError(ShiftLabError, RuntimeError):
    pass


class ZeroPsiError(ShiftLabError, RuntimeError):
    pass


class OverlappingFamilyError(ShiftLabError, ValueError):
    pass


class CertificateError(ShiftLabError):
    """A certificate failed independent verification."""


class ConsistencyError(ShiftLabError, AssertionError):
    """Two independent evaluation routes disagreed (an implementation bug)."""
