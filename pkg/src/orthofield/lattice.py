"""Rectangular-lattice core: multi-indices, prefix sums, box sums.

Conventions used by the whole package live here.  A lattice of shape
n = (n_1, ..., n_d) holds one value per site i with 1 <= i_q <= n_q,
and the public accessors are 1-based to match the coordinatewise
partial order on indices (i <= j iff i_q <= j_q for every axis).
Internally everything is a plain 0-based numpy array.

The prefix array S has S[i] = sum over the box [1, i].  Cumulative
passes run axis by axis in axis order, accumulating in float64, so a
given field always produces the bit-identical prefix array.
"""

from __future__ import annotations

import math
import operator
import os
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, TooLargeError

MultiIndex = tuple  # d-tuple of 1-based ints

DEFAULT_MAX_CELLS = 1 << 28
_ENV_MAX_CELLS = "ORTHOFIELD_MAX_CELLS"


def max_cells() -> int:
    """Cell cap for a single lattice, overridable via ORTHOFIELD_MAX_CELLS."""
    raw = os.environ.get(_ENV_MAX_CELLS)
    if raw is None:
        return DEFAULT_MAX_CELLS
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InvalidInputError(
            "%s must be a positive integer, got %r" % (_ENV_MAX_CELLS, raw)
        ) from exc
    if cap <= 0:
        raise InvalidInputError("%s must be positive, got %d" % (_ENV_MAX_CELLS, cap))
    return cap


def validate_shape(shape) -> tuple:
    try:
        shape = tuple(operator.index(n) for n in shape)
    except TypeError as exc:
        raise InvalidInputError("axis extents must be integers: %r" % (shape,)) from exc
    if len(shape) == 0:
        raise InvalidInputError("lattice needs at least one axis")
    if any(n < 1 for n in shape):
        raise InvalidInputError("every axis extent must be >= 1, got %r" % (shape,))
    cells = volume(shape)
    cap = max_cells()
    if cells > cap:
        raise TooLargeError(
            "lattice with %d cells exceeds the cap of %d (raise %s to override)"
            % (cells, cap, _ENV_MAX_CELLS)
        )
    return shape


def volume(shape) -> int:
    return int(math.prod(int(n) for n in shape))


def dominated(i: MultiIndex, j: MultiIndex) -> bool:
    """Coordinatewise order: i <= j on every axis."""
    if len(i) != len(j):
        raise InvalidInputError("indices of different dimension: %r vs %r" % (i, j))
    return all(a <= b for a, b in zip(i, j))


def validate_index(index: MultiIndex, shape) -> tuple:
    try:
        index = tuple(operator.index(k) for k in index)
    except TypeError as exc:
        raise InvalidInputError("lattice indices must be integers: %r" % (index,)) from exc
    if len(index) != len(shape):
        raise InvalidInputError(
            "index %r has dimension %d, lattice has %d" % (index, len(index), len(shape))
        )
    for k, n in zip(index, shape):
        if not 1 <= k <= n:
            raise InvalidInputError("index %r outside lattice of shape %r" % (index, shape))
    return index


@dataclass(frozen=True)
class LatticeArray:
    """One float per lattice site, with 1-based accessors."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        validate_shape(arr.shape)
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def d(self) -> int:
        return self.values.ndim

    def get(self, index: MultiIndex) -> float:
        index = validate_index(index, self.shape)
        return float(self.values[tuple(k - 1 for k in index)])


def _as_values(field) -> np.ndarray:
    if isinstance(field, LatticeArray):
        return field.values
    arr = np.asarray(field, dtype=np.float64)
    validate_shape(arr.shape)
    return arr


def prefix_sum(field) -> np.ndarray:
    """S[i] = sum of the field over the box [1, i], axis-by-axis cumsum."""
    out = _as_values(field).astype(np.float64, copy=True)
    for axis in range(out.ndim):
        np.cumsum(out, axis=axis, out=out)
    return out


def padded_prefix(prefix: np.ndarray) -> np.ndarray:
    """Prefix array with an explicit zero face glued on at index 0 of
    every axis, so box sums can index lo-1 without branching."""
    prefix = np.asarray(prefix, dtype=np.float64)
    out = np.zeros(tuple(n + 1 for n in prefix.shape), dtype=np.float64)
    out[tuple(slice(1, None) for _ in prefix.shape)] = prefix
    return out


def max_abs_prefix(field) -> float:
    """max over 1 <= i <= n of |S_i|."""
    return float(np.max(np.abs(prefix_sum(field))))


def rect_sum(prefix: np.ndarray, lo: MultiIndex, hi: MultiIndex) -> float:
    """Sum of the underlying field over the closed box [lo, hi] (1-based),
    recovered from the prefix array by inclusion-exclusion over the 2^d
    corners."""
    prefix = np.asarray(prefix, dtype=np.float64)
    d = prefix.ndim
    lo = validate_index(lo, prefix.shape)
    hi = validate_index(hi, prefix.shape)
    if not dominated(lo, hi):
        raise InvalidInputError("rect_sum needs lo <= hi, got %r, %r" % (lo, hi))
    padded = padded_prefix(prefix)
    total = 0.0
    for mask in range(1 << d):
        corner = []
        sign = 1.0
        for q in range(d):
            if mask >> q & 1:
                corner.append(lo[q] - 1)
                sign = -sign
            else:
                corner.append(hi[q])
        total += sign * padded[tuple(corner)]
    return float(total)
