"""Normalized partial-sum process of a lattice field on [0, 1]^d.

W(t) = |n|^(-1/2) * sum_i vol(R_i intersect prod_q [0, n_q t_q]) X_i,
where R_i is the unit cell anchored at site i.  The overlap volume
factorizes across axes as prod_q clamp(n_q t_q - (i_q - 1), 0, 1), so
W restricted to a grid cell is multiaffine and matches S_k / sqrt(|n|)
at grid points t = (k_q / n_q).

Two evaluation routes are provided on purpose: eval_W contracts the
raw field against per-axis weights over the support box (the defining
sum, O(prod ceil(n_q t_q)) cells), while eval_W_batch interpolates the
cached prefix array (O(2^d) per point).  They agree up to rounding and
are cross-checked in the test suite; hot paths use the second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidRangeError
from .lattice import (
    LatticeArray,
    padded_prefix,
    prefix_sum,
    validate_index,
    validate_shape,
    volume,
)


@dataclass(frozen=True)
class PartialSumProcess:
    field: np.ndarray
    prefix: np.ndarray
    padded: np.ndarray
    sqrt_vol: float

    @property
    def shape(self) -> tuple:
        return self.field.shape

    @property
    def d(self) -> int:
        return self.field.ndim


def from_field(field) -> PartialSumProcess:
    values = field.values if isinstance(field, LatticeArray) else np.asarray(field, np.float64)
    validate_shape(values.shape)
    prefix = prefix_sum(values)
    return PartialSumProcess(
        field=values,
        prefix=prefix,
        padded=padded_prefix(prefix),
        sqrt_vol=math.sqrt(volume(values.shape)),
    )


def _validate_point(t, d) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64).reshape(-1)
    if t.shape[0] != d:
        raise InvalidInputError("point %r has wrong dimension, expected %d" % (t, d))
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise InvalidRangeError("point %r outside [0, 1]^%d" % (t, d))
    return t


def overlap_volume(site, shape, t) -> float:
    """Lebesgue volume of cell(site) intersected with prod_q [0, n_q t_q]."""
    shape = validate_shape(shape)
    site = validate_index(site, shape)
    t = _validate_point(t, len(shape))
    out = 1.0
    for i_q, n_q, t_q in zip(site, shape, t):
        out *= float(np.clip(n_q * t_q - (i_q - 1), 0.0, 1.0))
    return out


def eval_W(p: PartialSumProcess, t) -> float:
    """W(t) by direct contraction over the support box."""
    t = _validate_point(t, p.d)
    weights = []
    for n_q, t_q in zip(p.shape, t):
        cells = min(n_q, int(math.ceil(n_q * t_q)))
        if cells <= 0:
            return 0.0
        weights.append(np.clip(n_q * t_q - np.arange(cells), 0.0, 1.0))
    acc = p.field[tuple(slice(0, len(w)) for w in weights)]
    for w in weights:
        acc = np.tensordot(w, acc, axes=(0, 0))
    return float(acc) / p.sqrt_vol


def eval_W_batch(p: PartialSumProcess, points) -> np.ndarray:
    """W at many points via multiaffine interpolation of the prefix array."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != p.d:
        raise InvalidInputError("points must have shape (m, %d)" % p.d)
    if np.any(pts < 0.0) or np.any(pts > 1.0):
        raise InvalidRangeError("points outside [0, 1]^%d" % p.d)
    n = np.asarray(p.shape, dtype=np.float64)
    x = pts * n
    base = np.minimum(np.floor(x), n - 1.0)
    np.maximum(base, 0.0, out=base)
    frac = x - base
    base = base.astype(np.int64)
    flat = p.padded.ravel()
    dims = p.padded.shape
    total = np.zeros(pts.shape[0], dtype=np.float64)
    for mask in range(1 << p.d):
        w = np.ones(pts.shape[0], dtype=np.float64)
        idx = []
        for q in range(p.d):
            if mask >> q & 1:
                idx.append(base[:, q] + 1)
                w = w * frac[:, q]
            else:
                idx.append(base[:, q])
                w = w * (1.0 - frac[:, q])
        total += w * flat[np.ravel_multi_index(tuple(idx), dims)]
    return total / p.sqrt_vol


def grid_value(p: PartialSumProcess, k) -> float:
    """S_k / sqrt(|n|) at the 1-based grid index k (k_q = 0 allowed)."""
    k = tuple(int(v) for v in k)
    if len(k) != p.d or any(not 0 <= v <= n for v, n in zip(k, p.shape)):
        raise InvalidInputError("grid index %r outside lattice %r" % (k, p.shape))
    return float(p.padded[k]) / p.sqrt_vol


def delta_q(p: PartialSumProcess, q: int, t: float, t_prime: float, s) -> float:
    """|W(..., t', ...) - W(..., t, ...)| moving only coordinate q, the
    other coordinates pinned at s (a (d-1)-vector)."""
    if not 1 <= q <= p.d:
        raise InvalidInputError("axis %d outside 1..%d" % (q, p.d))
    s = np.asarray(s, dtype=np.float64).reshape(-1)
    if s.shape[0] != p.d - 1:
        raise InvalidInputError("s must have dimension %d" % (p.d - 1))
    a = np.empty(p.d)
    b = np.empty(p.d)
    rest = [i for i in range(p.d) if i != q - 1]
    a[rest] = s
    b[rest] = s
    a[q - 1] = t
    b[q - 1] = t_prime
    pts = np.vstack([a, b])
    vals = eval_W_batch(p, pts)
    return float(abs(vals[1] - vals[0]))


def _snap_floor(x: float) -> int:
    """floor with a snap for grid values reached through float division."""
    r = round(x)
    if abs(x - r) < 1e-9:
        return int(r)
    return int(math.floor(x))


def _node_grid(shape_rest) -> np.ndarray:
    """All grid nodes (k_l / n_l) over the listed axes, shape (m, len)."""
    axes = [np.arange(n + 1, dtype=np.float64) / n for n in shape_rest]
    mesh = np.meshgrid(*axes, indexing="ij") if axes else []
    if not mesh:
        return np.zeros((1, 0))
    return np.stack([m.ravel() for m in mesh], axis=1)


@dataclass(frozen=True)
class Lemma11Result:
    lhs: float
    rhs: float
    block_term: float
    slice_term: float
    indicator: int
    ramp: float
    holds: bool

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "block_term": self.block_term,
            "slice_term": self.slice_term,
            "indicator": self.indicator,
            "ramp": self.ramp,
            "holds": bool(self.holds),
        }


def lemma11_check(p: PartialSumProcess, t: float, t_prime: float, s_grid=None) -> Lemma11Result:
    """Deterministic increment bound along the first coordinate.

    lhs = sqrt(|n|) sup_s |W(t', s) - W(t, s)| (the sup over s is exact
    on the node grid because the increment is multiaffine in s), and

    rhs = 3^d [ 1{t' - t >= 1/n_1} max_k' |block sum| +
                min(1, n_1 (t' - t)) max_{i_1} max_k' |slice prefix| ]

    where the block runs over i_1 in ([n_1 t]+1, ..., [n_1 t']) and the
    slice prefix is the per-hyperplane partial sum over the other axes.
    """
    if not 0.0 <= t < t_prime <= 1.0:
        raise InvalidRangeError("need 0 <= t < t' <= 1, got %r, %r" % (t, t_prime))
    n1 = p.shape[0]
    rest = p.shape[1:]
    if s_grid is None:
        s_grid = _node_grid(rest)
    else:
        s_grid = np.asarray(s_grid, dtype=np.float64)
        if s_grid.ndim != 2 or s_grid.shape[1] != p.d - 1:
            raise InvalidInputError("s_grid must have shape (m, %d)" % (p.d - 1))

    pts_lo = np.column_stack([np.full(len(s_grid), t), s_grid])
    pts_hi = np.column_stack([np.full(len(s_grid), t_prime), s_grid])
    lhs = p.sqrt_vol * float(
        np.max(np.abs(eval_W_batch(p, pts_hi) - eval_W_batch(p, pts_lo)))
    )

    three_d = 3.0**p.d
    a = _snap_floor(n1 * t)
    b = _snap_floor(n1 * t_prime)
    gap = n1 * (t_prime - t)
    indicator = 1 if gap >= 1.0 - 1e-9 else 0

    block_term = 0.0
    if indicator and b > a:
        block = p.padded[b] - p.padded[a]
        block_term = float(np.max(np.abs(block)))

    slices = np.abs(np.diff(p.padded, axis=0))
    slice_term = float(np.max(slices))

    ramp = min(1.0, gap)
    rhs = three_d * (indicator * block_term + ramp * slice_term)
    holds = lhs <= rhs + 1e-9 * max(1.0, abs(rhs))
    return Lemma11Result(lhs, rhs, three_d * indicator * block_term,
                         three_d * ramp * slice_term, indicator, ramp, holds)


def lipschitz_ratio(p: PartialSumProcess, pairs) -> float:
    """Max over pairs of |W(t) - W(t')| divided by the coarse bound
    sqrt(|n|) ||t - t'||_inf sum|X|.  Coincident pairs are skipped; an
    all-zero field gives 0.

    The normalized ratio stays at or below 1 whenever every axis has at
    least two cells.  Shapes with unit axes in d >= 2 can push a corner
    increment past the bound (see tests), so callers comparing against
    1 should keep n_q >= 2.
    """
    pairs = list(pairs)
    if not pairs:
        raise InvalidInputError("need at least one (t, t') pair")
    total_abs = float(np.sum(np.abs(p.field)))
    if total_abs == 0.0:
        return 0.0
    best = 0.0
    for t, t_prime in pairs:
        t = _validate_point(t, p.d)
        t_prime = _validate_point(t_prime, p.d)
        sup_dist = float(np.max(np.abs(t - t_prime)))
        if sup_dist == 0.0:
            continue
        vals = eval_W_batch(p, np.vstack([t, t_prime]))
        ratio = float(abs(vals[0] - vals[1])) / (p.sqrt_vol * sup_dist * total_abs)
        best = max(best, ratio)
    return best
