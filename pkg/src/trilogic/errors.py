"""Exception types raised across the package."""


class TrilogicError(Exception):
    """Base class for every error raised by this package."""


class SingularMatrix(TrilogicError):
    pass


class NotCollinear(TrilogicError):
    pass


class DegenerateSpan(TrilogicError):
    pass


class DegenerateConstruction(TrilogicError):
    pass


class NonCotemporal(TrilogicError):
    pass


class MissingSnapshotAffinity(TrilogicError):
    pass


class ParseError(TrilogicError):
    """Database text could not be parsed; carries a 1-based position."""

    def __init__(self, message, line, col):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


class ArityMismatch(TrilogicError):
    pass


class NonCotemporalTriangle(TrilogicError):
    pass


class BadArity(TrilogicError):
    pass


class FormulaSyntaxError(TrilogicError):
    """Formula text could not be parsed; ``pos`` is a 0-based offset."""

    def __init__(self, message, pos):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


class UnknownPredicate(TrilogicError):
    pass


class ArityError(TrilogicError):
    pass


class SortError(TrilogicError):
    pass


class UnknownRelation(TrilogicError):
    pass


class NotTriple(TrilogicError):
    pass


class UnsupportedConstruct(TrilogicError):
    pass


class UniverseOverflow(TrilogicError):
    pass


class UnboundVariable(TrilogicError):
    pass
