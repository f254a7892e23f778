"""Exception hierarchy shared by every module."""


class CarnotError(Exception):
    """Base class for all errors raised by carnot_forge."""


class DimensionError(CarnotError, ValueError):
    pass


class FrameError(CarnotError):
    """The frame matrix at the base point is singular or otherwise malformed."""


class BracketConditionError(CarnotError):
    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


class PreconditionError(CarnotError):
    pass


class AlgebraError(CarnotError):
    """Structure constants fail antisymmetry, grading or the Jacobi identity."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FlowDomainError(CarnotError):
    """A numerical trajectory left the guard radius."""


class ParseError(CarnotError):
    def __init__(self, message, offset=None, path=None):
        where = []
        if offset is not None:
            where.append(f"offset {offset}")
        if path is not None:
            where.append(f"at {path}")
        super().__init__(message + (f" ({', '.join(where)})" if where else ""))
        self.offset = offset
        self.path = path
        self.reason = message
