"""Exception hierarchy shared by every alert_swarm module."""

from typing import List, Optional


class AlertSwarmError(Exception):
    """Base class for all alert_swarm errors."""


class InvalidConfig(AlertSwarmError):
    """A world configuration breaks one or more invariants."""

    def __init__(self, message: str, issues: Optional[List] = None):
        super().__init__(message)
        self.issues = list(issues or [])

    def __reduce__(self):
        return (InvalidConfig, (str(self), self.issues))


class ValidationError(InvalidConfig):
    """Raised by config validation; lists every violated rule."""

    def __init__(self, issues: List):
        lines = [str(issue) for issue in issues]
        super().__init__(
            f"{len(issues)} config rule(s) violated: " + "; ".join(lines),
            issues,
        )

    def __reduce__(self):
        return (ValidationError, (self.issues,))


class ParseError(AlertSwarmError):
    """The config file is malformed or has nodes of the wrong type."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.message = message
        self.path = path

    def __reduce__(self):
        return (ParseError, (self.message, self.path))


class DegenerateAgreement(AlertSwarmError):
    """Fleiss' kappa is undefined because expected agreement equals 1."""

    def __init__(self, observed: float):
        super().__init__(
            f"expected agreement is 1 (observed agreement {observed:.6f}); "
            "kappa undefined"
        )
        self.observed = observed

    def __reduce__(self):
        return (DegenerateAgreement, (self.observed,))


class SubjectMismatch(AlertSwarmError):
    """Two beliefs compared against each other refer to different cells."""


class EmptyNeighborhood(AlertSwarmError):
    """Inclusion probabilities requested for an empty neighborhood."""


class UnknownReporter(AlertSwarmError):
    """A behavior report came from a reporter without a reputation entry."""

    def __init__(self, reporter: int):
        super().__init__(f"no reputation entry for reporter {reporter}")
        self.reporter = reporter

    def __reduce__(self):
        return (UnknownReporter, (self.reporter,))


class SimulationInvariantError(AlertSwarmError):
    """Internal simulation invariant violated; the run is aborted."""
