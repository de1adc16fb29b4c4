"""Exception types shared across the library."""


class ContractViolation(ValueError):
    """An operation was called with arguments that break its precondition."""


class EdgeListParseError(ValueError):
    """A line of an edge-list file could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class EnumerationCapExceeded(RuntimeError):
    """The exact solver refused to enumerate too many subsets."""
