"""Exception types raised across the package."""


class RotinvError(Exception):
    """Base class for all package errors."""


class ZeroMass(RotinvError):
    """Image has zero total intensity, so no gravity center exists."""


class EmptyImage(RotinvError):
    """No pixel exceeds the requested intensity threshold."""


class InvalidIndex(RotinvError, ValueError):
    """Zernike (n, m) pair violates |m| <= n or the parity rule."""


class NotPowerOfTwo(RotinvError, ValueError):
    pass


class DegenerateNormalizer(RotinvError):
    """Fourier-Mellin normalizing coefficient is (numerically) zero."""


class DegenerateHistogram(RotinvError):
    """All pixels fall in a single histogram bin."""


class EmptyStructuringElement(RotinvError, ValueError):
    pass


class InvalidCondition(RotinvError, ValueError):
    pass


class MissingFile(RotinvError, FileNotFoundError):
    pass


class MalformedRow(RotinvError, ValueError):
    """A CSV row could not be parsed. ``line`` is 1-based and counts the header."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ZeroSelected(RotinvError):
    """Confidence filtering retained no rows."""


class RankOutOfRange(RotinvError, ValueError):
    pass


class DegenerateClass(RotinvError, ValueError):
    pass


class DimensionMismatch(RotinvError, ValueError):
    pass


class SingleClass(RotinvError, ValueError):
    """Only one class is present where two are required."""


class NonFinite(RotinvError, ValueError):
    pass


class TooFewItems(RotinvError, ValueError):
    pass


class ConfigError(RotinvError, ValueError):
    pass
