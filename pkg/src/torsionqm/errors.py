"""Exception hierarchy shared by all modules."""


class TorsionQMError(Exception):
    """Base class for package errors."""


class SingularPointError(TorsionQMError, ValueError):
    """Evaluation requested at (or within the exclusion radius of) a defect."""


class PathThroughDefectError(SingularPointError):
    """A closed path passes through a defect position."""


class DomainError(TorsionQMError, ValueError):
    """Argument outside the documented domain of a special function."""


class NonConvergenceError(TorsionQMError, ArithmeticError):
    """An iterative or limiting procedure failed to settle."""


class ToleranceNotMetError(NonConvergenceError):
    """A quadrature did not reach its requested accuracy."""


class ZeroWaveVectorError(TorsionQMError, ValueError):
    """Plane-wave quantity requested for k = 0."""


class PairingError(TorsionQMError, ValueError):
    """Fringe peaks of two profiles could not be matched one to one."""


class GridMismatchError(TorsionQMError, ValueError):
    """Sampled states live on different grids or time windows."""


class ConfigError(TorsionQMError, ValueError):
    """Malformed or inconsistent experiment configuration."""
