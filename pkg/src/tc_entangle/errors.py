"""Exception hierarchy shared by all modules."""


class TCEntangleError(Exception):
    """Base class for every error raised by this package."""


class InvariantViolation(TCEntangleError, ValueError):
    """A density-matrix or state invariant failed.

    ``check`` names the failed test (``"hermitian"``, ``"trace"``, ``"psd"``,
    ``"normalization"``...) so callers can report it.
    """

    def __init__(self, check, message):
        super().__init__(f"{check}: {message}")
        self.check = check


class DimensionError(TCEntangleError, ValueError):
    """Operand has the wrong shape."""


class DomainError(TCEntangleError, ValueError):
    """Argument outside the domain of the operation."""


class NumericalFailure(TCEntangleError, ArithmeticError):
    """A numerical routine produced a result that violates theory."""


class TruncationError(TCEntangleError, ValueError):
    """Amplitude would leak past the retained Fock-space cutoff."""


class ConfigError(TCEntangleError, ValueError):
    """Invalid experiment configuration; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
