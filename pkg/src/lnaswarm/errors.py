"""Exception types shared across the package."""

from __future__ import annotations


class LnaSwarmError(Exception):
    """Base class for all package errors."""


class TouchstoneError(LnaSwarmError, ValueError):
    """Malformed device file. Carries the 1-based line number when known."""

    def __init__(self, reason: str, line: int | None = None):
        self.reason = reason
        self.line = line
        msg = reason if line is None else f"line {line}: {reason}"
        super().__init__(msg)


class FrequencyRangeError(LnaSwarmError, ValueError):
    pass


class MissingNoiseDataError(LnaSwarmError, ValueError):
    pass


class SingularError(LnaSwarmError, ArithmeticError):
    """A transform or formula hit a pole (short, open, oscillation boundary)."""


class SingularTransformError(SingularError):
    pass


class SingularGainError(SingularError):
    pass


class NoiseFigureUndefinedError(SingularError):
    """Source conductance is not positive, so the noise formula does not apply."""


class EmptyCircleError(LnaSwarmError, ValueError):
    pass


class DegenerateCircleError(LnaSwarmError, ValueError):
    """Zero noise resistance: every passive source meets any target above f_min."""


class ObjectiveContractError(LnaSwarmError, RuntimeError):
    pass
