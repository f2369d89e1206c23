"""Exception types shared across the package."""


class SigbasisError(Exception):
    """Base class for all library errors."""


class StructureError(SigbasisError):
    """Mismatched widths, ranks, or contexts between operands."""


class ContractError(SigbasisError):
    """An operation was called outside its stated precondition."""


class ParseError(SigbasisError):
    """Malformed input text; carries a 1-based line/column position."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class LimitExceeded(SigbasisError):
    """A configured insertion or time cap was hit; carries partial state."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
