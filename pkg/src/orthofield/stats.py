"""Small shared statistics helpers."""

from __future__ import annotations

import math

from .errors import InvalidInputError


def wilson_interval(hits: int, trials: int, z: float = 1.96) -> tuple:
    """Wilson score interval for a binomial proportion.

    Preferred over the normal interval because it stays informative at
    zero observed hits, which is the common case for tail events.
    """
    if trials <= 0:
        raise InvalidInputError("trials must be positive")
    if not 0 <= hits <= trials:
        raise InvalidInputError("hits %d outside [0, %d]" % (hits, trials))
    p = hits / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))
