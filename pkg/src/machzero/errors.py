"""Exception hierarchy shared by all modules."""


class MachZeroError(Exception):
    """Base class for all package errors."""


class DomainError(MachZeroError):
    """Pressure or specific volume outside the admissible domain (vacuum guard)."""


class NotAShock(MachZeroError):
    """Wave classified as a rarefaction where a shock was required."""


class NotARarefaction(MachZeroError):
    """Wave classified as a shock where a rarefaction was required."""


class ZeroSizeWave(MachZeroError):
    """A wave of zero strength cannot be classified."""


class NoConvergence(MachZeroError):
    """Root finder failed to reach tolerance."""


class NoBracket(MachZeroError):
    """No sign change found for the bisection oracle."""


class InadmissibleScenario(MachZeroError):
    """Initial datum violates the scenario admissibility checks."""


class EventCapExceeded(MachZeroError):
    """Event count exceeded the configured cap (runaway interaction guard)."""


class OutOfRange(MachZeroError):
    """Query outside the recorded time/space range."""


class MissingTrace(MachZeroError):
    """A required interface trace was not recorded."""


class InfeasibleConstants(MachZeroError):
    """Weight construction impossible for the supplied constants."""


class CFLViolation(MachZeroError):
    """Requested CFL number exceeds the stability bound."""


class ParseError(MachZeroError):
    """Scenario file could not be parsed."""


class ValidationError(MachZeroError):
    """Scenario contents failed validation; message carries the field path."""
