"""Exception hierarchy shared by all modules."""


class VerificationError(Exception):
    """Base class for every error raised by the engine."""


class UnsupportedPrime(VerificationError, ValueError):
    pass


class ZeroToPrecision(VerificationError, ArithmeticError):
    """A value has no nonzero digit at the working precision."""


class NotSquare(VerificationError, ValueError):
    pass


class NoSolution(VerificationError):
    """A norm/representation equation is provably unsolvable."""


class DegreeOverflow(VerificationError, OverflowError):
    pass


class NotMonomial(VerificationError, ValueError):
    pass


class FieldMismatch(VerificationError, ValueError):
    pass


class UnsupportedField(VerificationError, ValueError):
    pass


class InternalDeciderMismatch(VerificationError, AssertionError):
    """Two independent decision routes disagreed; this is a bug."""


class NotPure(VerificationError, ValueError):
    pass


class NotInvertible(VerificationError, ArithmeticError):
    pass


class NotSimilitude(VerificationError, ValueError):
    pass


class NotDiagonal(VerificationError, ValueError):
    pass


class NrdUnsupported(VerificationError, ValueError):
    pass


class Inconclusive(VerificationError):
    pass


class MalformedInvolution(VerificationError, ValueError):
    pass


class ConfigError(VerificationError, ValueError):
    """Invalid scenario or command-line configuration."""
