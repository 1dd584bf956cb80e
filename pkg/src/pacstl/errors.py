"""Exception hierarchy shared across the package."""


class PacStlError(Exception):
    """Base class for all package errors."""


class InputError(PacStlError, ValueError):
    """Malformed arguments: wrong dimensions, unknown names, bad ranges."""


class NumericalError(PacStlError, ArithmeticError):
    """A numerical routine failed to converge or hit an ill-conditioned matrix."""


class DivergenceError(NumericalError):
    """A simulated state became non-finite."""


class ConfigError(PacStlError):
    """Invalid or incomplete run configuration."""
