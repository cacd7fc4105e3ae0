"""Exception types raised across the package."""


class QFError(Exception):
    """Base class for all library errors."""


class NotCoprime(QFError, ValueError):
    pass


class NotOddPrime(QFError, ValueError):
    pass


class NotPrime(QFError, ValueError):
    pass


class NotOdd(QFError, ValueError):
    pass


class NoPair(QFError, ValueError):
    pass


class NotASquare(QFError, ArithmeticError):
    pass


class NotSquare(QFError, ValueError):
    """A matrix operation needed a square matrix."""


class NotSymmetric(QFError, ValueError):
    pass


class NotInvertible(QFError, ArithmeticError):
    pass


class NotPrimitive(QFError, ValueError):
    pass


class ModulusMismatch(QFError, ValueError):
    pass


class DimensionMismatch(QFError, ValueError):
    pass


class WitnessError(QFError, AssertionError):
    """A claimed transformation failed re-verification."""


class Degenerate(QFError, ValueError):
    pass


class ZeroInput(QFError, ValueError):
    pass


class PrecisionTooLow(QFError, ValueError):
    pass


class ThresholdNotMet(QFError, ValueError):
    pass


class PreconditionViolated(QFError, ValueError):
    pass


class NotSameTrain(QFError, ValueError):
    pass


class UniverseTooLarge(QFError, ValueError):
    pass


class SymbolParseError(QFError, ValueError):
    pass


class NoRepresentation(QFError, ArithmeticError):
    """No primitive representation exists; certified by exhaustion mod p^m."""

    def __init__(self, msg, p=None, m=None):
        super().__init__(msg)
        self.p = p
        self.m = m


class RetriesExhausted(QFError, RuntimeError):
    """A randomized search ran out of attempts."""

    def __init__(self, msg, stage=None):
        super().__init__(msg)
        self.stage = stage


class Inequivalent(QFError, ValueError):
    """Two forms are not equivalent; `difference` names a distinguishing invariant."""

    def __init__(self, msg, difference=None):
        super().__init__(msg)
        self.difference = difference
