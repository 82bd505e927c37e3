"""Exception types raised by the solvers and checkers."""

__all__ = [
    "PushfrontError",
    "ComplexRootsError",
    "Overshoot",
    "DomainTooSmall",
    "BracketError",
    "Inconsistent",
    "InstabilityError",
    "NoCrossing",
    "NonMonotone",
    "MultipleCrossings",
    "IllConditionedFit",
    "EpsilonBudget",
    "SearchExhausted",
    "ConfigError",
]


class PushfrontError(Exception):
    """Base class for all package errors."""


class ComplexRootsError(PushfrontError):
    """The characteristic quadratic has no real roots at the requested speed."""


class Overshoot(PushfrontError):
    """The shooting trajectory crossed zero, i.e. the speed is below c*."""


class DomainTooSmall(PushfrontError):
    """An integration or search range ended before the target was reached."""


class BracketError(PushfrontError):
    """Bisection bracket could not be established."""


class Inconsistent(PushfrontError):
    """Speed criterion and tail-decay criterion disagree on the front type."""


class InstabilityError(PushfrontError):
    """A time stepper produced non-finite or runaway values."""


class NoCrossing(PushfrontError):
    """The field never crosses the requested level inside the band."""


class NonMonotone(PushfrontError):
    """The field crosses the level with the wrong slope sign."""


class MultipleCrossings(PushfrontError):
    """A column of a 2D field crosses the level more than once."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"multiple level crossings in column {index}")


class IllConditionedFit(PushfrontError):
    """A least-squares fit was requested on too little data."""


class EpsilonBudget(PushfrontError):
    """Modulation constants push q(infinity) above the allowed epsilon."""


class SearchExhausted(PushfrontError):
    """No constants in the search ladder produced the required sign."""

    def __init__(self, message, worst=None):
        self.worst = worst
        super().__init__(message)


class ConfigError(PushfrontError):
    """Invalid experiment configuration."""
