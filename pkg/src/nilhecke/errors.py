"""Exception hierarchy for nilhecke."""

from __future__ import annotations


class NilheckeError(Exception):
    """Base class for every error raised by the package."""


class NotAUnit(NilheckeError, ZeroDivisionError):
    """An inverse was requested for a non-unit."""


class PrecisionExhausted(NilheckeError):
    """A decision needs coefficients beyond the known precision."""


class NotInvertible(NilheckeError):
    """A matrix that must be invertible is not."""


class UnsupportedGenus(NilheckeError):
    """The curve backend does not support the requested operation."""


class WindowTooSmall(NilheckeError):
    """A pole or truncation window could not certify a computation."""


class OutOfWindow(NilheckeError):
    """A bundle falls outside the enumerated window."""


class WindowTooLarge(NilheckeError):
    """The window exceeds the configured resource guard."""


class InteriorEmpty(NilheckeError):
    """No window class has its whole modification fan inside the window."""


class CharacteristicTwo(NilheckeError):
    """The operation needs an odd characteristic."""


class WindowInsufficient(NilheckeError):
    """A dimension did not stabilise under window growth."""


class AlphaIsSquare(NilheckeError):
    """The Hitchin base point must be a non-square."""


class DimensionMismatch(NilheckeError):
    """A computed dimension disagrees with its predicted value."""


class ConfigError(NilheckeError, ValueError):
    """Invalid run or curve configuration."""


class StageError(NilheckeError):
    """A pipeline stage failed; carries the stage label."""

    def __init__(self, stage: str, cause: BaseException) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
