"""Exception types shared across the package."""


class FfmcError(Exception):
    """Base class for all package errors."""


class ResourceLimitError(FfmcError):
    """A configured resource cap would be exceeded.

    The message always names the cap that was hit.
    """


class ConductorMismatchError(FfmcError):
    """Euler-product guard coefficients did not vanish.

    Raised when an L-function series fails to stabilise at the degree
    bound implied by the character's conductor, which signals that the
    conductor (or the character data) is wrong.
    """


class InternalCountError(FfmcError):
    """A point-counting self-check (functional equation) failed.

    This always indicates a counting bug, never bad user input.
    """


class ConfigError(FfmcError):
    """Invalid configuration or scenario file."""
