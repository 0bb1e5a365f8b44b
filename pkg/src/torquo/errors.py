"""Exception hierarchy shared by all torquo modules."""


class TorquoError(Exception):
    """Base class for every error raised by torquo."""


class ZeroVector(TorquoError, ValueError):
    pass


class DimensionMismatch(TorquoError, ValueError):
    pass


class InvalidFan(TorquoError):
    """A fan failed validation. ``report`` holds the full ValidationReport."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class FanNotComplete(InvalidFan):
    pass


class ConeNotInFan(TorquoError, ValueError):
    pass


class NotACircuit(TorquoError):
    pass


class WrongLocalStructure(TorquoError):
    pass


class NotARelation(TorquoError, ValueError):
    """A coefficient vector is not a linear relation among the rays."""


class ClassNotInCone(TorquoError):
    pass


class NotPositive(TorquoError):
    def __init__(self, message, negative=()):
        super().__init__(message)
        self.negative = tuple(negative)


class ConditionBFailed(TorquoError):
    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class InternalConsistencyError(TorquoError, AssertionError):
    """Raised when two independent computations disagree.

    This never signals bad input; it means the implementation is wrong.
    """


class QuotientNotValid(InternalConsistencyError):
    pass


class InductionMismatch(InternalConsistencyError):
    pass
