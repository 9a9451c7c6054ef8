"""Exception hierarchy shared across the package."""


class AchemError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AchemError):
    """Chemistry source text could not be parsed or validated.

    Carries a 1-based line and column pointing at the offending token.
    """

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class UnknownReactionError(AchemError):
    """A reaction name does not exist in the chemistry."""


class UnknownSymbolError(AchemError):
    """A molecule symbol is not declared in the chemistry."""


class InfeasibleReactionError(AchemError):
    """A reaction was applied to a state that cannot supply its inputs."""


class MissingChemistryError(AchemError):
    """The trace carries no chemistry, so reaction-aware analysis cannot run."""


class MalformedEntityError(AchemError):
    """A hierarchical entity violates well-formedness (e.g. a singleton set)."""


class WitnessMismatchError(AchemError):
    """A supplied cycle witness does not describe the given trace."""


class BudgetExceededError(AchemError):
    """A bounded search hit its enumeration cap before finishing.

    The result is inconclusive rather than negative; callers must not
    treat this as "nothing found".
    """

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class TraceFormatError(AchemError):
    """Base class for trace deserialization failures."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedRecordError(TraceFormatError):
    """A trace record is not syntactically valid (bad JSON, bad counts)."""


class TraceInvariantError(TraceFormatError):
    """Trace records are individually valid but violate ordering rules."""
