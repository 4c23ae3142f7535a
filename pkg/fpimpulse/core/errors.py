# errors.py
# -----------------------------------------------------------------------------
# Exception hierarchy. Each class carries the CLI exit code of its category:
#   1 configuration / input, 2 numerical stability, 3 non-convergence, 4 I/O.
# -----------------------------------------------------------------------------

from __future__ import annotations


class FpImpulseError(Exception):
    """Base class for all errors raised by fpimpulse."""

    exit_code = 1


class ConfigError(FpImpulseError, ValueError):
    """Configuration could not be parsed or failed validation."""

    def __init__(self, message: str, problems: list[str] | None = None):
        self.problems = list(problems or [])
        if self.problems:
            message = message + "\n  " + "\n  ".join(self.problems)
        super().__init__(message)


class ParameterError(ConfigError):
    """A domain parameter set violates its invariants."""


class InputError(FpImpulseError, ValueError):
    """Inputs to an operation are empty, inconsistent or out of range."""


class PolicyError(InputError):
    """A control value lies outside the admissible interval [0, U]."""


class StabilityError(FpImpulseError, ArithmeticError):
    """A time step violates the stability guard or a field lost positivity."""

    exit_code = 2


class StatisticsError(FpImpulseError, ArithmeticError):
    """A statistic is undefined for the given sample (e.g. zero spread)."""

    exit_code = 2


class NonConvergenceError(FpImpulseError, RuntimeError):
    """An iterative solve stopped without reaching its fixed point."""

    exit_code = 3


class ArtifactIOError(FpImpulseError, OSError):
    """Reading an input file or writing an artifact failed."""

    exit_code = 4
