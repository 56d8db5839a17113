"""Exception hierarchy for lossyhom."""


class LossyHOMError(Exception):
    """Base class for all package errors."""


class NotPhysical(LossyHOMError, ValueError):
    """A beam splitter violates the passivity (energy) constraint."""

    def __init__(self, message, bound=None, cos_phi=None):
        super().__init__(message)
        self.bound = bound
        self.cos_phi = cos_phi


class ZeroBaseline(LossyHOMError, ValueError):
    pass


class BaselineTooShort(LossyHOMError, ValueError):
    pass


class GridTooCoarse(LossyHOMError, RuntimeError):
    pass


class ParseError(LossyHOMError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class NonMonotonic(LossyHOMError, ValueError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class RowNotNormalized(LossyHOMError, ValueError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class UnknownPair(LossyHOMError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class DegenerateData(LossyHOMError, ValueError):
    pass


class NoConvergence(LossyHOMError, RuntimeError):
    pass
