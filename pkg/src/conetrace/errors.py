"""Exception hierarchy shared by all conetrace modules."""


class ConetraceError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(ConetraceError, ValueError):
    """Invalid input (bad arguments, malformed configuration)."""


class PoleArgument(ValidationError):
    """Function evaluated at one of its poles."""


class DomainError(ValidationError):
    pass


class OutOfRange(ValidationError):
    pass


class FileFormat(ValidationError):
    pass


class Unsupported(ConetraceError):
    """Requested quantity is outside what the implementation provides."""


class UnsupportedPoleOrder(Unsupported):
    pass


class NumericFailure(ConetraceError, ArithmeticError):
    """A numerical procedure did not reach its tolerance."""


class ConvergenceFailure(NumericFailure):
    pass


class QuadratureFailure(NumericFailure):
    pass


class InsufficientSpectrum(NumericFailure):
    pass


class CutoffTooSmall(NumericFailure):
    pass


class TruncationUnsafe(NumericFailure):
    pass


class IllConditioned(NumericFailure):
    pass
