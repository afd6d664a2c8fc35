"""Holder-scale moduli and the dyadic pyramid expansion on [0, 1]^d.

A modulus here is rho(h) = h^(1/2) (ln(c/h))^(d/2) L(1/h) with L one of
a small family of slowly varying factors.  Functions on [0, 1]^d are
measured through the coefficient seminorm

    sup_j rho(2^-j)^{-1} max_{v in V_j} |lambda_{j,v}(x)|,

where V_j are the new dyadic nodes at level j, lambda_{0,v}(x) = x(v),
and for j >= 1 lambda_{j,v}(x) = x(v) - (x(v-) + x(v+)) / 2 with v-+
the two neighbors obtained by moving every odd coordinate of v one
step down / up at resolution 2^-j.  The pyramid function

    Lambda(t) = max(0, 1 - max_{t_i > 0} t_i - max_{t_i < 0} (-t_i))

(empty maxima read as zero) reproduces itself under these coefficients:
its own level yields exactly 1 at its center node and coarser levels
yield exactly 0.  At finer levels in d = 1 the coefficients vanish by
affineness; in d >= 2 they are measured, not asserted.

The level sets are truncated at a caller-chosen J_max.  For the
partial-sum process of an (n_1, ..., n_d) lattice the truncation is
exact once J_max covers log2(max n_q): beyond that resolution the
process is multiaffine on every dyadic cell and new coefficients
vanish in d = 1 / stay at rounding scale in the measured cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import generators
from .errors import (
    DegenerateModulusError,
    InvalidInputError,
    InvalidRangeError,
    InvalidSiteError,
    NoParentsError,
    TooLargeError,
)
from .lattice import max_cells, prefix_sum
from .stats import wilson_interval

# ---------------------------------------------------------------- moduli


@dataclass(frozen=True)
class SlowlyVarying:
    kind: str
    beta: float = 1.0
    c0: float = 1.0

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if np.any(t < 1.0):
            raise InvalidRangeError("slowly varying factors are evaluated on t >= 1")
        if self.kind == "log_power":
            out = (1.0 + np.log1p(t)) ** self.beta
        elif self.kind == "iter_log":
            out = 1.0 + np.log1p(np.log1p(t))
        elif self.kind == "const":
            out = np.full_like(t, self.c0)
        else:
            raise InvalidInputError("unknown slowly varying kind %r" % self.kind)
        return out if out.ndim else float(out)


def log_power(beta: float) -> SlowlyVarying:
    if beta < 0:
        raise InvalidRangeError("log_power exponent must be >= 0")
    return SlowlyVarying("log_power", beta=float(beta))


def iter_log() -> SlowlyVarying:
    return SlowlyVarying("iter_log")


def const_factor(c0: float) -> SlowlyVarying:
    if c0 <= 0:
        raise InvalidRangeError("const factor must be positive")
    return SlowlyVarying("const", c0=float(c0))


@dataclass(frozen=True)
class Modulus:
    c: float
    d: int
    L: SlowlyVarying

    def to_dict(self) -> dict:
        L = {"kind": self.L.kind}
        if self.L.kind == "log_power":
            L["beta"] = self.L.beta
        elif self.L.kind == "const":
            L["c0"] = self.L.c0
        return {"c": self.c, "d": self.d, "L": L}


def modulus_from_dict(data: dict, check_increasing: bool = True) -> Modulus:
    spec = data.get("L", {"kind": "const", "c0": 1.0})
    kind = spec.get("kind")
    if kind == "log_power":
        L = log_power(float(spec.get("beta", 1.0)))
    elif kind == "iter_log":
        L = iter_log()
    elif kind == "const":
        L = const_factor(float(spec.get("c0", 1.0)))
    else:
        raise InvalidInputError("unknown slowly varying kind %r" % (kind,))
    return modulus(float(data["c"]), int(data["d"]), L, check_increasing=check_increasing)


def modulus(c: float, d: int, L: SlowlyVarying, check_increasing: bool = True,
            levels: int = 40) -> Modulus:
    """Build a modulus, by default verifying it increases along the
    dyadic grid h = 2^-j, j = 0..levels (the resolution at which the
    package ever evaluates it).  Pass check_increasing=False to build
    formula objects that are outside the increasing class."""
    if c <= 1.0:
        raise InvalidRangeError("need c > 1 so ln(c/h) > 0 on (0, 1]")
    if d < 1:
        raise InvalidRangeError("dimension must be >= 1")
    rho = Modulus(float(c), int(d), L)
    if check_increasing:
        values = [modulus_eval(rho, 2.0**-j) for j in range(levels + 1)]
        for a, b in zip(values[1:], values[:-1]):
            if not a < b:
                raise DegenerateModulusError(
                    "modulus is not increasing on the dyadic grid (c=%g too small?)" % c
                )
    return rho


def modulus_eval(rho: Modulus, h) -> float:
    h_arr = np.asarray(h, dtype=np.float64)
    if np.any(h_arr <= 0.0) or np.any(h_arr > 1.0):
        raise InvalidRangeError("modulus is defined on h in (0, 1]")
    out = np.sqrt(h_arr) * np.log(rho.c / h_arr) ** (rho.d / 2.0) * rho.L(1.0 / h_arr)
    return out if out.ndim else float(out)


# --------------------------------------------------------- dyadic levels


@dataclass(frozen=True)
class DyadicSite:
    """Node k 2^-j of the level-j grid, stored as integers (j, k)."""

    j: int
    k: tuple

    def __post_init__(self):
        if self.j < 0:
            raise InvalidSiteError("level must be >= 0")
        top = 1 << self.j
        k = tuple(int(v) for v in self.k)
        if any(not 0 <= v <= top for v in k):
            raise InvalidSiteError("site %r outside level-%d grid" % (k, self.j))
        object.__setattr__(self, "k", k)

    @property
    def coords(self) -> np.ndarray:
        return np.asarray(self.k, dtype=np.float64) / (1 << self.j)


def in_level_set(site: DyadicSite) -> bool:
    """Membership in V_j: every corner at level 0, odd-coordinate nodes after."""
    if site.j == 0:
        return True
    return any(v % 2 == 1 for v in site.k)


def full_grid_count(j: int, d: int) -> int:
    return (2**j + 1) ** d


def level_set_count(j: int, d: int) -> int:
    """|V_j| = (2^j + 1)^d - (2^(j-1) + 1)^d for j >= 1, (2^0+1)^d at 0."""
    if j == 0:
        return 2**d
    return full_grid_count(j, d) - full_grid_count(j - 1, d)


def _level_k_array(j: int, d: int) -> np.ndarray:
    """Integer k rows of V_j, shape (|V_j|, d)."""
    if j < 0 or d < 1:
        raise InvalidRangeError("need j >= 0 and d >= 1")
    total = full_grid_count(j, d)
    if total > max_cells():
        raise TooLargeError("level grid with %d nodes exceeds the cell cap" % total)
    if j == 0:
        axes = [np.array([0, 1])] * d
    else:
        axes = [np.arange(2**j + 1)] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    k = np.stack([m.ravel() for m in mesh], axis=1)
    if j == 0:
        return k
    keep = (k % 2 == 1).any(axis=1)
    return k[keep]


def dyadic_sites(j: int, d: int) -> list:
    """V_j as DyadicSite objects (use the array form in hot loops)."""
    return [DyadicSite(j, tuple(row)) for row in _level_k_array(j, d)]


def pyramid_eval(site: DyadicSite, t):
    """Lambda(2^j (t - v)) for one site; t is a point or an (m, d) array."""
    pts = np.asarray(t, dtype=np.float64)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != len(site.k):
        raise InvalidInputError("points have dimension %d, site has %d"
                                % (pts.shape[1], len(site.k)))
    y = pts * float(1 << site.j) - np.asarray(site.k, dtype=np.float64)
    pos = np.maximum(0.0, y.max(axis=1))
    neg = np.maximum(0.0, -y.min(axis=1))
    out = np.maximum(0.0, 1.0 - pos - neg)
    return float(out[0]) if single else out


def vpm(site: DyadicSite) -> tuple:
    """The parent pair (v-, v+): odd coordinates move one grid step."""
    if site.j == 0:
        raise NoParentsError("level-0 corners have no parent pair")
    if not in_level_set(site):
        raise InvalidSiteError("site %r is not in V_%d" % (site.k, site.j))
    lo = tuple(v - 1 if v % 2 == 1 else v for v in site.k)
    hi = tuple(v + 1 if v % 2 == 1 else v for v in site.k)
    return DyadicSite(site.j, lo), DyadicSite(site.j, hi)


def schauder_coeff(x, site: DyadicSite) -> float:
    """lambda_{j,v}(x) for a vectorized evaluator x: (m, d) -> (m,)."""
    if site.j == 0:
        return float(np.asarray(x(site.coords[None, :])).reshape(-1)[0])
    lo, hi = vpm(site)
    pts = np.stack([site.coords, lo.coords, hi.coords])
    vals = np.asarray(x(pts), dtype=np.float64).reshape(-1)
    return float(vals[0] - 0.5 * (vals[1] + vals[2]))


def _level_coeffs(x, j: int, d: int) -> np.ndarray:
    k = _level_k_array(j, d)
    v = k.astype(np.float64) / (1 << j)
    if j == 0:
        return np.asarray(x(v), dtype=np.float64).reshape(-1)
    odd = k % 2 == 1
    lo = (k - odd).astype(np.float64) / (1 << j)
    hi = (k + odd).astype(np.float64) / (1 << j)
    vals = np.asarray(x(np.concatenate([v, lo, hi], axis=0)), dtype=np.float64)
    m = len(k)
    return vals[:m] - 0.5 * (vals[m : 2 * m] + vals[2 * m :])


@dataclass(frozen=True)
class SeqNormResult:
    norm: float
    level: int
    per_level: tuple  # (j, max_abs_coeff, scaled) rows

    def to_dict(self) -> dict:
        return {
            "norm": self.norm,
            "level": self.level,
            "per_level": [list(row) for row in self.per_level],
        }


def seq_norm(x, rho: Modulus, j_max: int) -> SeqNormResult:
    """Truncated coefficient seminorm of a vectorized evaluator."""
    if j_max < 0:
        raise InvalidRangeError("j_max must be >= 0")
    rows = []
    best = -1.0
    best_level = 0
    for j in range(j_max + 1):
        coeffs = _level_coeffs(x, j, rho.d)
        peak = float(np.max(np.abs(coeffs)))
        scaled = peak / modulus_eval(rho, 2.0**-j)
        rows.append((j, peak, scaled))
        if scaled > best:
            best = scaled
            best_level = j
    return SeqNormResult(best, best_level, tuple(rows))


def process_evaluator(process):
    """Adapter: a PartialSumProcess as a vectorized [0,1]^d evaluator."""
    from .sumprocess import eval_W_batch

    return lambda pts: eval_W_batch(process, pts)


# ------------------------------------------------------ tightness sums


@dataclass(frozen=True)
class TightnessRow:
    j: int
    shape: tuple
    threshold: float
    hits: int
    p_hat: float
    scaled: float
    scaled_se: float

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "shape": list(self.shape),
            "threshold": self.threshold,
            "hits": self.hits,
            "p_hat": self.p_hat,
            "scaled": self.scaled,
            "scaled_se": self.scaled_se,
        }


@dataclass(frozen=True)
class TightnessResult:
    rows: tuple
    total: float
    replicas: int

    def tail_sum(self, j_from: int) -> float:
        return float(sum(r.scaled for r in self.rows if r.j >= j_from))

    def to_dict(self) -> dict:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "total": self.total,
            "replicas": self.replicas,
        }


def tightness_sum_estimate(
    spec,
    rho: Modulus,
    eps: float,
    q: int,
    j_from: int,
    m,
    replicas: int,
    seed: int,
    batch: int = 256,
) -> TightnessResult:
    """Monte Carlo estimate of the dyadic tightness sum

        sum_{j=J}^{m_q} 2^j P{ max_k |S_k| > eps rho(2^-j) prod_u 2^(m_u/2) }

    where the max runs over the box with axis-q extent 2^(m_q - j) and
    full extent 2^(m_u) on the other axes.  Fresh fields per (j,
    replica); the scaled standard error is 2^j times the Wilson
    half-width, so zero-hit levels still carry an honest width.
    """
    m = tuple(int(v) for v in m)
    if len(m) != spec.d:
        raise InvalidInputError("m %r does not match generator dimension %d" % (m, spec.d))
    if not 1 <= q <= spec.d:
        raise InvalidRangeError("axis q=%d outside 1..%d" % (q, spec.d))
    if eps <= 0:
        raise InvalidRangeError("eps must be positive")
    if not 0 <= j_from <= m[q - 1]:
        raise InvalidRangeError("need 0 <= J <= m_q, got J=%d, m_q=%d" % (j_from, m[q - 1]))
    if replicas < 1:
        raise InvalidInputError("replicas must be >= 1")

    sqrt_full = math.prod(2.0 ** (mu / 2.0) for mu in m)
    rows = []
    for j in range(j_from, m[q - 1] + 1):
        shape = tuple(2 ** (mu - j) if u == q - 1 else 2**mu for u, mu in enumerate(m))
        threshold = eps * modulus_eval(rho, 2.0**-j) * sqrt_full
        hits = 0
        done = 0
        while done < replicas:
            take = min(batch, replicas - done)
            fields = generators.generate_batch(
                spec, shape, seed, j * replicas + done, take
            )
            prefixes = fields.copy()
            for axis in range(1, fields.ndim):
                np.cumsum(prefixes, axis=axis, out=prefixes)
            peaks = np.abs(prefixes).max(axis=tuple(range(1, fields.ndim)))
            hits += int(np.count_nonzero(peaks > threshold))
            done += take
        p_hat = hits / replicas
        lo, hi = wilson_interval(hits, replicas)
        rows.append(
            TightnessRow(
                j=j,
                shape=shape,
                threshold=threshold,
                hits=hits,
                p_hat=p_hat,
                scaled=(2.0**j) * p_hat,
                scaled_se=(2.0**j) * 0.5 * (hi - lo),
            )
        )
    total = float(sum(r.scaled for r in rows))
    return TightnessResult(tuple(rows), total, replicas)
