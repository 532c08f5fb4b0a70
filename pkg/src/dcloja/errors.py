"""Exception hierarchy.

Input and configuration problems derive from :class:`InputError` (the CLI maps
them to exit code 65). Reported outcomes such as a failed bound are not
exceptions; they live in the returned report objects.
"""

from __future__ import annotations


class DCError(Exception):
    """Base class for every error raised by this package."""


class InputError(DCError, ValueError):
    """Invalid input or configuration."""


class SequenceError(InputError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NonNormalized(SequenceError):
    pass


class NotIncreasing(SequenceError):
    pass


class NotLogConvex(SequenceError):
    pass


class SequenceExhausted(DCError, IndexError):
    """An explicit (finite) sequence was queried past its last value."""


class GridTooNarrow(DCError):
    pass


class BracketNotFound(DCError):
    pass


class DimensionMismatch(InputError):
    pass


class ZeroConstantTerm(DCError, ZeroDivisionError):
    """The series has no constant term; the expansion point lies on the zero set."""


class DegreeCapExceeded(DCError):
    pass


class OnZeroSet(DCError):
    pass


class DegreeBudgetExceeded(DCError):
    pass


class EmptyGrid(DCError):
    pass


class AllPointsOnZeroSet(DCError):
    pass


class NoFitInLadder(DCError):
    pass


class IrrationalPowerAtSample(InputError):
    pass


class StepFailed(DCError):
    def __init__(self, step: str, witness=None, message: str = ""):
        super().__init__(message or f"step ({step}) failed at {witness!r}")
        self.step = step
        self.witness = witness
