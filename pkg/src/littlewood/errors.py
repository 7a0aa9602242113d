"""Exception types shared across the package."""


class LittlewoodError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LittlewoodError, ValueError):
    """Malformed problem data (NaN/Inf, non-monotone frequencies, bad shapes)."""


class HypothesisViolated(LittlewoodError):
    """A precondition of an inequality (gap, window order, eta bound) fails.

    The ``hypothesis`` attribute names the violated condition so that the
    CLI can report it verbatim.
    """

    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis or message


class GapViolated(HypothesisViolated):
    """Consecutive frequency gap below the required minimum."""

    def __init__(self, message, index=None):
        super().__init__(message, hypothesis="unit gap")
        self.index = index


class NonConvergence(LittlewoodError):
    """An iterative estimate did not meet its tolerance within budget."""


class AliasingSuspected(LittlewoodError):
    """Too much spectral energy sits in the top octave of a DFT grid."""

    def __init__(self, message, tail_fraction=None):
        super().__init__(message)
        self.tail_fraction = tail_fraction


class NotFound(LittlewoodError):
    """A bounded search exhausted its budget without meeting the target."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
