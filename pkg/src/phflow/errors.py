"""Exception types shared across the package."""


class PhflowError(Exception):
    """Base class for all package errors."""


class DomainError(PhflowError):
    """State left the admissible set (nonpositive density or internal energy)."""


class ConfigError(PhflowError):
    """Invalid configuration or incompatible solver options."""


class TopologyError(PhflowError):
    """Operation requires a bounded (or periodic) mesh and got the other kind."""


class StepError(PhflowError):
    """A time step produced an inadmissible state; usually dt is too large."""


class ConvergenceError(PhflowError):
    """The implicit stage solve failed to reach the requested residual."""


class IOError_(PhflowError):
    """Output artifact could not be written."""
