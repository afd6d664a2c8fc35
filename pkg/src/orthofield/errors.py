"""Exception taxonomy shared across the package.

Every error raised on purpose derives from OrthofieldError so callers
(and the command line driver) can separate "the input was bad" from a
genuine crash.
"""


class OrthofieldError(Exception):
    """Base class for all deliberate errors raised by this package."""


class InvalidInputError(OrthofieldError, ValueError):
    """Malformed argument: wrong shape, unknown variant, bad JSON."""


class InvalidRangeError(OrthofieldError, ValueError):
    """Argument outside its mathematical domain (x <= 0, h > 1, ...)."""


class TooLargeError(OrthofieldError, ValueError):
    """Requested lattice or site set exceeds the configured cell cap."""


class NotTranslatableError(OrthofieldError, ValueError):
    """Generator variant does not support evaluation on shifted sites."""


class NumericFailureError(OrthofieldError, RuntimeError):
    """A quadrature or grid sup did not converge / stabilize."""


class InsufficientDataError(OrthofieldError, ValueError):
    """Too few (or degenerate) samples for the requested estimate."""


class DegenerateModulusError(OrthofieldError, ValueError):
    """Modulus is not increasing on (0, 1] at the checked resolution."""


class InvalidSiteError(OrthofieldError, ValueError):
    """Dyadic site outside its level grid, or not in the level set."""


class NoParentsError(OrthofieldError, ValueError):
    """Corner sites of a level-0 grid have no parent pair."""
