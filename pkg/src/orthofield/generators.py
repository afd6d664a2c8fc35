"""Random field generators on rectangular lattices.

All variants produce centered fields whose value at a site is a pure
function of (master seed, replica, variant stream, absolute site
coordinates), see _rng.  That buys three things at once: replicas are
reproducible under any batching, translated windows of the same
infinite field can be evaluated directly (shift_field), and the
product variants expose their per-axis factor streams exactly
(decoupled_product_kernel).

Variants
--------
iid_symmetric       independent symmetric values at every site
                    (rademacher, gaussian(sigma), weibull_symmetric(gamma))
product_rademacher  X_i = prod_q eps^(q)_{i_q} with +-1 axis streams
decoupled_product   same product structure with a configurable base law
moving_average      X_i = eps_i + eps_{i-e_axis}; deliberately fails the
                    one-sided conditional-centering battery on that axis
                    (negative control for orthomartingale_check)
zero                degenerate all-zero field (testing hook)

The weibull_symmetric law has survival P{|X| > s} = min(1, 2 exp(-s^gamma)),
so sup_s exp(s^gamma) P{|X| > s} = 2 exactly: it sits on the boundary of
the envelope class used by the large-deviation bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc
from scipy.special import ndtri

from . import _rng
from .errors import InvalidInputError, InvalidRangeError, NotTranslatableError
from .lattice import LatticeArray, validate_index, validate_shape

_VARIANTS = ("iid_symmetric", "product_rademacher", "decoupled_product", "moving_average", "zero")
_DISTS = ("rademacher", "gaussian", "weibull_symmetric")

# stream labels folded into every key; distinct per (variant, dist) so
# different generators at the same master seed are not coupled
_VARIANT_TAG = {name: 101 + k for k, name in enumerate(_VARIANTS)}
_DIST_TAG = {name: 201 + k for k, name in enumerate(_DISTS)}


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus replica index; replica streams never overlap."""

    master: int
    replica: int = 0

    def __post_init__(self):
        if self.replica < 0:
            raise InvalidInputError("replica index must be >= 0")


@dataclass(frozen=True, eq=True)
class GeneratorSpec:
    variant: str
    d: int
    params: tuple = field(default=())  # sorted (key, value) pairs

    def param(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default


def _make_spec(variant: str, d: int, **params) -> GeneratorSpec:
    if variant not in _VARIANTS:
        raise InvalidInputError("unknown generator variant %r" % variant)
    if d < 1:
        raise InvalidRangeError("field dimension must be >= 1, got %d" % d)
    dist = params.get("dist")
    if variant in ("iid_symmetric", "decoupled_product", "moving_average"):
        if dist not in _DISTS:
            raise InvalidInputError("variant %r needs dist in %r, got %r" % (variant, _DISTS, dist))
        if dist == "gaussian":
            sigma = float(params.setdefault("sigma", 1.0))
            if sigma <= 0:
                raise InvalidRangeError("gaussian sigma must be positive")
            params["sigma"] = sigma
        if dist == "weibull_symmetric":
            gamma = params.get("gamma")
            if gamma is None or float(gamma) <= 0:
                raise InvalidRangeError("weibull_symmetric needs gamma > 0")
            params["gamma"] = float(gamma)
    if variant == "moving_average":
        axis = int(params.setdefault("axis", 1))
        if not 1 <= axis <= d:
            raise InvalidRangeError("moving_average axis %d outside 1..%d" % (axis, d))
        params["axis"] = axis
    return GeneratorSpec(variant, int(d), tuple(sorted(params.items())))


def iid_rademacher(d: int) -> GeneratorSpec:
    return _make_spec("iid_symmetric", d, dist="rademacher")


def iid_gaussian(d: int, sigma: float = 1.0) -> GeneratorSpec:
    return _make_spec("iid_symmetric", d, dist="gaussian", sigma=sigma)


def iid_weibull(d: int, gamma: float) -> GeneratorSpec:
    return _make_spec("iid_symmetric", d, dist="weibull_symmetric", gamma=gamma)


def product_rademacher(d: int) -> GeneratorSpec:
    return _make_spec("product_rademacher", d)


def decoupled_product(d: int, dist: str = "rademacher", **params) -> GeneratorSpec:
    return _make_spec("decoupled_product", d, dist=dist, **params)


def moving_average(d: int, axis: int = 1, dist: str = "rademacher", **params) -> GeneratorSpec:
    return _make_spec("moving_average", d, axis=axis, dist=dist, **params)


def zero_field(d: int) -> GeneratorSpec:
    return _make_spec("zero", d)


def spec_to_json(spec: GeneratorSpec) -> str:
    return json.dumps(
        {"variant": spec.variant, "d": spec.d, "params": dict(spec.params)},
        sort_keys=True,
    )


def spec_from_json(text: str) -> GeneratorSpec:
    try:
        raw = json.loads(text) if isinstance(text, str) else dict(text)
        variant = raw["variant"]
        d = int(raw["d"])
        params = dict(raw.get("params", {}))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise InvalidInputError("malformed generator spec: %r" % (text,)) from exc
    return _make_spec(variant, d, **params)


def weibull_tail_sample(gamma: float, u):
    """Inverse-CDF map from uniform(0,1) to the symmetric law with
    P{|X| > s} = min(1, 2 exp(-s^gamma)).  Accepts arrays."""
    if gamma <= 0:
        raise InvalidRangeError("gamma must be positive, got %r" % gamma)
    arr = np.asarray(u, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise InvalidRangeError("u must lie strictly inside (0, 1)")
    magnitude = (-np.log(np.minimum(arr, 1.0 - arr))) ** (1.0 / gamma)
    out = np.where(arr >= 0.5, magnitude, -magnitude)
    return out if out.ndim else float(out)


def spec_variance(spec: GeneratorSpec) -> float:
    """Site variance of the field (product variants multiply across axes)."""
    dist = spec.param("dist")
    if spec.variant == "zero":
        return 0.0
    if spec.variant == "product_rademacher":
        return 1.0
    var = _dist_variance(dist, spec)
    if spec.variant == "iid_symmetric":
        return var
    if spec.variant == "decoupled_product":
        return var**spec.d
    if spec.variant == "moving_average":
        return 2.0 * var
    raise InvalidInputError("unknown variant %r" % spec.variant)


def _dist_variance(dist: str, spec: GeneratorSpec) -> float:
    if dist == "rademacher":
        return 1.0
    if dist == "gaussian":
        return float(spec.param("sigma")) ** 2
    # |X| = (ln 2 + E)^(1/gamma) with E ~ Exp(1), so
    # E X^2 = 2 Gamma(1 + 2/gamma) Q(1 + 2/gamma, ln 2)
    gamma = float(spec.param("gamma"))
    a = 1.0 + 2.0 / gamma
    return float(2.0 * math.gamma(a) * gammaincc(a, math.log(2.0)))


def _dist_values(h: np.ndarray, dist: str, spec: GeneratorSpec) -> np.ndarray:
    if dist == "rademacher":
        return _rng.sign_pm1(h)
    if dist == "gaussian":
        return float(spec.param("sigma")) * ndtri(_rng.uniform01(h))
    return weibull_tail_sample(float(spec.param("gamma")), _rng.uniform01(h))


def _axis_coords(shape, offset):
    """Absolute 1-based coordinates per axis, shifted by the offset."""
    if offset is None:
        offset = (0,) * len(shape)
    offset = tuple(int(k) for k in offset)
    if len(offset) != len(shape):
        raise InvalidInputError("offset %r does not match shape %r" % (offset, shape))
    return [np.arange(1, n + 1, dtype=np.int64) + k for n, k in zip(shape, offset)]


def _grid_hash(key, replicas: np.ndarray, coords) -> np.ndarray:
    d = len(coords)
    h = _rng.fold(key, replicas.reshape((-1,) + (1,) * d))
    for q, c in enumerate(coords):
        shape = [1] * (d + 1)
        shape[q + 1] = len(c)
        h = _rng.fold(h, c.reshape(shape))
    return h


def _axis_hash(key_q, replicas: np.ndarray, coords_q: np.ndarray) -> np.ndarray:
    h = _rng.fold(key_q, replicas.reshape(-1, 1))
    return _rng.fold(h, coords_q.reshape(1, -1))


def _base_key(spec: GeneratorSpec, master_seed: int, axis: int):
    dist = spec.param("dist")
    dist_tag = _DIST_TAG.get(dist, 0)
    return _rng.stream_key(master_seed, _VARIANT_TAG[spec.variant], dist_tag, axis)


def generate_batch(
    spec: GeneratorSpec,
    shape,
    master_seed: int,
    replica_start: int,
    count: int,
    offset=None,
) -> np.ndarray:
    """Fields for replicas [replica_start, replica_start + count) as an
    array of shape (count, n_1, ..., n_d)."""
    shape = validate_shape(shape)
    if len(shape) != spec.d:
        raise InvalidInputError("spec has d=%d but shape is %r" % (spec.d, shape))
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    reps = np.arange(replica_start, replica_start + count, dtype=np.int64)
    coords = _axis_coords(shape, offset)
    d = spec.d

    if spec.variant == "zero":
        return np.zeros((count,) + shape, dtype=np.float64)

    if spec.variant == "iid_symmetric":
        h = _grid_hash(_base_key(spec, master_seed, 0), reps, coords)
        return _dist_values(h, spec.param("dist"), spec)

    if spec.variant in ("product_rademacher", "decoupled_product"):
        dist = "rademacher" if spec.variant == "product_rademacher" else spec.param("dist")
        out = np.ones((count,) + shape, dtype=np.float64)
        for q in range(d):
            h = _axis_hash(_base_key(spec, master_seed, q + 1), reps, coords[q])
            vals = _dist_values(h, dist, spec)
            shape_q = [1] * (d + 1)
            shape_q[0] = count
            shape_q[q + 1] = shape[q]
            out *= vals.reshape(shape_q)
        return out

    if spec.variant == "moving_average":
        axis = int(spec.param("axis")) - 1
        ext_coords = list(coords)
        ext_coords[axis] = np.concatenate(([coords[axis][0] - 1], coords[axis]))
        h = _grid_hash(_base_key(spec, master_seed, 0), reps, ext_coords)
        base = _dist_values(h, spec.param("dist"), spec)
        lead = [slice(None)] * (d + 1)
        lag = [slice(None)] * (d + 1)
        lead[axis + 1] = slice(1, None)
        lag[axis + 1] = slice(0, -1)
        return base[tuple(lead)] + base[tuple(lag)]

    raise NotTranslatableError("variant %r has no site-addressed form" % spec.variant)


def generate(spec: GeneratorSpec, shape, seed: SeedSpec) -> LatticeArray:
    batch = generate_batch(spec, shape, seed.master, seed.replica, 1)
    return LatticeArray(batch[0])


def shift_field(spec: GeneratorSpec, shape, seed: SeedSpec, k) -> LatticeArray:
    """The same infinite field evaluated on the window [1+k, n+k]."""
    batch = generate_batch(spec, shape, seed.master, seed.replica, 1, offset=k)
    return LatticeArray(batch[0])


def decoupled_product_kernel(*values):
    """The degenerate product kernel h(x_1, ..., x_r) = prod x_q.

    With centered inputs, conditioning on all but one factor leaves a
    centered variable, which is the degeneracy making product fields
    orthomartingale differences.  Accepts scalars or broadcastable
    arrays (one entry per factor)."""
    if not values:
        raise InvalidInputError("kernel needs at least one factor")
    out = np.asarray(values[0], dtype=np.float64)
    for v in values[1:]:
        out = out * np.asarray(v, dtype=np.float64)
    return out if out.ndim else float(out)


def product_factor_streams(spec: GeneratorSpec, shape, seed: SeedSpec, offset=None):
    """Per-axis factor streams of a product variant; their outer product
    is exactly generate()."""
    if spec.variant not in ("product_rademacher", "decoupled_product"):
        raise InvalidInputError("kernel is defined for product variants, not %r" % spec.variant)
    shape = validate_shape(shape)
    if len(shape) != spec.d:
        raise InvalidInputError("spec has d=%d but shape is %r" % (spec.d, shape))
    dist = "rademacher" if spec.variant == "product_rademacher" else spec.param("dist")
    reps = np.asarray([seed.replica], dtype=np.int64)
    coords = _axis_coords(shape, offset)
    out = []
    for q in range(spec.d):
        h = _axis_hash(_base_key(spec, seed.master, q + 1), reps, coords[q])
        out.append(_dist_values(h, dist, spec)[0])
    return out


@dataclass(frozen=True)
class MartingaleRow:
    axis: int
    site: tuple
    test: str
    mean: float
    se: float
    z: float


@dataclass(frozen=True)
class OrthomartingaleResult:
    rows: tuple
    passed: bool
    replicas: int
    z_threshold: float

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "replicas": self.replicas,
            "z_threshold": self.z_threshold,
            "rows": [
                {
                    "axis": r.axis,
                    "site": list(r.site),
                    "test": r.test,
                    "mean": r.mean,
                    "se": r.se,
                    "z": r.z,
                }
                for r in self.rows
            ],
        }


def _default_check_sites(shape):
    corner = tuple(shape)
    mid = tuple(max(2, (n + 1) // 2) for n in shape)
    sites = [corner]
    if mid != corner:
        sites.append(mid)
    return sites


def orthomartingale_check(
    spec: GeneratorSpec,
    shape,
    seed: SeedSpec,
    replicas: int = 2000,
    axes=None,
    sites=None,
    batch: int = 512,
) -> OrthomartingaleResult:
    """Monte Carlo battery for one-direction conditional centering.

    For each tested axis q and site i, estimates E[X_i g(past)] for
    g in {1, sign(past sum), clipped past sum} where the past sum runs
    over the box [1, i - e_q].  Each mean must sit within 4 standard
    errors of zero.  The battery cannot prove the property; it is a
    screen with an analytic negative control (moving_average fails on
    its own axis because E[X_i X_{i-e_axis}] = Var(eps) > 0).
    """
    shape = validate_shape(shape)
    if replicas < 1000:
        raise InvalidInputError("need at least 1000 replicas for the 4-se screen")
    d = spec.d
    axes = list(range(1, d + 1)) if axes is None else [int(a) for a in axes]
    sites = _default_check_sites(shape) if sites is None else [tuple(s) for s in sites]
    for a in axes:
        if not 1 <= a <= d:
            raise InvalidInputError("axis %d outside 1..%d" % (a, d))
    for s in sites:
        validate_index(s, shape)
        for a in axes:
            if s[a - 1] < 2:
                raise InvalidInputError("site %r has empty past on axis %d" % (s, a))

    tests = ("const", "sign", "clip")
    keys = [(a, s, t) for a in axes for s in sites for t in tests]
    sums = {k: 0.0 for k in keys}
    sq_sums = {k: 0.0 for k in keys}

    done = 0
    while done < replicas:
        take = min(batch, replicas - done)
        fields = generate_batch(spec, shape, seed.master, seed.replica + done, take)
        for a in axes:
            for s in sites:
                x_here = fields[(slice(None),) + tuple(c - 1 for c in s)]
                past_box = [slice(0, c) for c in s]
                past_box[a - 1] = slice(0, s[a - 1] - 1)
                past = fields[(slice(None),) + tuple(past_box)].sum(
                    axis=tuple(range(1, d + 1))
                )
                for t in tests:
                    if t == "const":
                        vals = x_here
                    elif t == "sign":
                        vals = x_here * np.sign(past)
                    else:
                        vals = x_here * np.clip(past, -1.0, 1.0)
                    sums[(a, s, t)] += float(vals.sum())
                    sq_sums[(a, s, t)] += float((vals * vals).sum())
        done += take

    rows = []
    passed = True
    for a, s, t in keys:
        mean = sums[(a, s, t)] / replicas
        var = max(0.0, sq_sums[(a, s, t)] / replicas - mean * mean)
        se = math.sqrt(var / replicas)
        z = 0.0 if se == 0.0 else mean / se
        if abs(z) > 4.0:
            passed = False
        rows.append(MartingaleRow(a, s, t, mean, se, z))
    return OrthomartingaleResult(tuple(rows), passed, replicas, 4.0)
