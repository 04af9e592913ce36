"""Exception hierarchy shared by all modules."""


class HuaPickrellError(Exception):
    """Base class for every error raised by the library."""

    exit_code = 3


class DomainError(HuaPickrellError, ValueError):
    """Argument outside the supported domain of an operation."""


class PolePassed(DomainError):
    """A hypergeometric or Gamma argument hits a pole."""


class NotDefined(DomainError):
    """The requested polynomial or quantity does not exist for these parameters."""


class NotInHalfplane(DomainError):
    """Matrix is not in the matrix right half-plane (A + A* > 0 fails)."""


class NotSorted(DomainError):
    """Spectrum is not sorted in descending order."""


class DegenerateSpectrum(DomainError):
    """Spectrum has coincident entries where distinct ones are required."""


class NumericalError(HuaPickrellError, ArithmeticError):
    """A numerical safeguard tripped."""

    exit_code = 4


class NoConvergence(NumericalError):
    """A series or iteration did not converge within its hard cap."""


class ImaginaryLeak(NumericalError):
    """A quantity that must be real came out with a sizeable imaginary part."""


class NegativeDeterminant(NumericalError):
    """A correlation determinant is negative beyond rounding tolerance."""


class NonPositive(NumericalError):
    """A Fredholm determinant came out non-positive."""


class EigenFailure(NumericalError):
    """Hermitian eigendecomposition missed its backward-error target."""


class TruncationInsufficient(NumericalError):
    """Stored parameters are too few to meet the requested truncation bound."""


class Underflow(NumericalError):
    """Value below the representable range; use the log-scale variant."""


class UsageError(HuaPickrellError):
    """Invalid command-line or configuration input."""

    exit_code = 2

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key
