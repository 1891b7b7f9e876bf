"""Exception types shared across the laboratory modules."""


class ObsLabError(Exception):
    """Base class for all obslab-specific failures."""


class InsufficientTruncationError(ObsLabError):
    """The stored spectral truncation cannot answer the query exactly."""


class ResolutionError(ObsLabError):
    """The grid is too coarse to certify the requested property."""


class ContainmentError(ObsLabError):
    """A supplied ball does not contain the spatial support it must cover."""


class ConvergenceError(ObsLabError):
    """An iterative solver exhausted its budget without meeting tolerance."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InfeasibleError(ObsLabError):
    """A feasibility problem has no admissible solution at the given horizon."""


class ConfigError(ObsLabError):
    """A configuration file failed validation; carries the offending field."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
