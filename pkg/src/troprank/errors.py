"""Exception hierarchy shared by all troprank modules."""


class TropRankError(Exception):
    """Base class for every error raised by troprank."""


class DimensionMismatch(TropRankError):
    pass


class InvalidCell(TropRankError):
    pass


class DegenerateCell(TropRankError):
    pass


class GenericityError(TropRankError):
    """A direction vector is orthogonal to some edge it must avoid."""


class NonRegular(TropRankError):
    """No coefficient vector induces the subdivision."""


class NonInterior(TropRankError):
    """A coefficient vector does not induce the given subdivision."""


class PreconditionError(TropRankError):
    pass


class BudgetError(TropRankError):
    pass


class InconsistentIdentification(TropRankError):
    pass


class MarkerError(TropRankError):
    pass


class InvalidSkeleton(TropRankError):
    pass


class ParseError(TropRankError):
    """Malformed input file; carries an optional line/column location."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
