"""Exception hierarchy shared by the solver modules."""


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SolverError):
    """A state or parameter lies outside the admissible region."""


class DegenerateState(SolverError):
    """A formula hit a vanishing denominator or zero component."""


class NoRoot(SolverError):
    """A scalar root search failed to bracket or converge."""


class ConfigMismatch(SolverError):
    """A wave-specific routine was called for the wrong wave type."""


class SingularSystem(SolverError):
    """A linear block in the interface derivative solve is singular."""


class StateSpaceViolation(SolverError):
    """An evolved cell average left the admissible region.

    Carries enough context to locate the failure.
    """

    def __init__(self, message, cell=None, time=None):
        super().__init__(message)
        self.cell = cell
        self.time = time


class ParseError(SolverError):
    """Malformed line in a run-configuration file."""

    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no


class ValidationError(SolverError):
    """Well-formed configuration with an invalid or unknown entry."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
