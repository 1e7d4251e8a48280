"""Exception hierarchy shared by the library, the CLI and the explorer."""


class ToricError(Exception):
    """Base class for every error raised on purpose by this package."""


class DomainError(ToricError, ValueError):
    """Bad input: out-of-range states, malformed statements, empty supports."""


class ModelFileError(DomainError):
    """A text file (model, distribution, table) failed to parse."""

    def __init__(self, path, line_number, message):
        self.path = path
        self.line_number = line_number
        self.message = message
        super().__init__(f"{path}:{line_number}: {message}")


class UndefinedValueError(DomainError):
    """A cross-product ratio with a zero denominator."""


class ContractError(ToricError):
    """An internal precondition was violated (e.g. non-Gröbner input)."""


class ResourceError(ToricError):
    """A configured cap or size bound was exceeded."""


class BudgetExceeded(ResourceError):
    """The Gröbner pipeline ran past its time or degree budget."""
