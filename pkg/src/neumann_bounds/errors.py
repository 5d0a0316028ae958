"""Exception hierarchy shared by all modules."""


class NeumannBoundsError(Exception):
    """Base class for all package errors."""


class DomainError(NeumannBoundsError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ParameterError(NeumannBoundsError, ValueError):
    """Scenario or formula parameters violate a required range."""


class ConvergenceError(NeumannBoundsError, RuntimeError):
    """An iterative solver failed to bracket or converge."""


class DensityError(NeumannBoundsError, ValueError):
    """Density sample is non-positive, non-finite, or unavailable."""


class MeshError(NeumannBoundsError, RuntimeError):
    """Triangulation failed a geometric validity check."""


class SolverError(NeumannBoundsError, RuntimeError):
    """Eigenvalue solver failed to converge."""


class ConfigError(NeumannBoundsError, ValueError):
    """Configuration file or constructor arguments are invalid."""
