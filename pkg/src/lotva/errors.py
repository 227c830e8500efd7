"""Exception types shared across the package."""


class LotvaError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LotvaError):
    """Syntax or reference error in one of the line-based file formats."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}: {message}" if column is None else \
                f"line {line}, column {column}: {message}"
        super().__init__(message)


class StructureError(LotvaError):
    """A value violates a structural invariant (bad ids, broken tree, ...)."""


class PreconditionError(LotvaError):
    """An operation was called outside its stated precondition."""


class DegenerateDiagramError(LotvaError):
    """A diagram query has no meaningful answer on this input.

    ``code`` is a stable machine-readable tag, e.g. ``degenerate-single-vertex``.
    """

    def __init__(self, code, message=None):
        self.code = code
        super().__init__(message or code)
