"""Exception types shared across the package."""


class ToralgError(Exception):
    pass


class ParseError(ToralgError, ValueError):
    """Malformed expression text. ``pos`` is the 0-based column of the fault."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}" if text else message)


class DomainError(ToralgError, ValueError):
    """Well-formed input whose value lies outside an operation's domain."""


class NonQuadraticError(DomainError):
    """The value is irrational but not a quadratic irrational."""

    def __init__(self, message: str, positive: bool):
        self.positive = positive
        super().__init__(message)


class UnsolvableError(ToralgError):
    pass


class InternalError(ToralgError, AssertionError):
    """An identity the algorithms guarantee did not hold."""
