"""Exception types shared by the library, the CLI and the API."""


class FeiError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FeiError, ValueError):
    """Input outside the supported domain (size caps, ranges, degenerate profiles)."""


class FormulaSyntaxError(DomainError):
    """Formula text could not be parsed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class CheckFailed(FeiError, AssertionError):
    """A named numerical check did not hold."""

    def __init__(self, check: str, detail: str = ""):
        super().__init__(f"{check}: {detail}" if detail else check)
        self.check = check
        self.detail = detail
