"""Exception types raised across the package."""


class ButterflyError(ValueError):
    pass


class UnsupportedDegree(ButterflyError):
    pass


class DegreeMismatch(ButterflyError):
    pass


class ReducibleModulus(ButterflyError):
    pass


class ZeroInverse(ZeroDivisionError, ButterflyError):
    pass


class BadParameters(ButterflyError):
    pass


class BadHypotheses(BadParameters):
    """Raised when a check needs k odd, gcd(i, k) = 1 or alpha outside {0, 1}."""


class TooLarge(ButterflyError):
    pass


class BadRange(ButterflyError):
    pass


class ShapeMismatch(ButterflyError):
    pass


class SingularMatrix(ButterflyError):
    pass


class BudgetExceeded(ButterflyError):
    pass
