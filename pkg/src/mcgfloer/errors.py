"""Exception types shared across the package."""


class MCGFloerError(Exception):
    """Base class for all package errors."""


# algebra
class NotAPartition(MCGFloerError):
    pass


class SurgeryDisconnected(MCGFloerError):
    pass


class MixedCircles(MCGFloerError):
    pass


# bimodule / calculus / hochschild
class IdempotentMismatch(MCGFloerError):
    pass


class ArityTooSmall(MCGFloerError):
    pass


class Inconsistent(MCGFloerError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness or []


class AlgebraMismatch(MCGFloerError):
    pass


class NonTerminating(MCGFloerError):
    def __init__(self, message: str, cycle=None):
        super().__init__(message)
        self.cycle = cycle or []


class NonStabilized(MCGFloerError):
    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory or []


class GradingNotHomogeneous(MCGFloerError):
    pass


# text formats
class ParseError(MCGFloerError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = "line %d" % line
            if column is not None:
                where += ", column %d" % column
            where += ": "
        super().__init__(where + message)


class SeedSyntaxError(ParseError):
    pass


class UnknownElement(ParseError):
    pass


class WordSyntaxError(ParseError):
    pass


class UnknownName(MCGFloerError):
    pass


# fixed point side
class SpecInvalid(MCGFloerError):
    pass


class NotASubcomplex(MCGFloerError):
    pass
