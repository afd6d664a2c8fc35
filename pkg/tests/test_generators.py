import json
import math

import numpy as np
import pytest
from scipy.integrate import quad

from orthofield import (
    InvalidInputError,
    InvalidRangeError,
    SeedSpec,
    decoupled_product,
    decoupled_product_kernel,
    generate,
    generate_batch,
    iid_gaussian,
    iid_rademacher,
    iid_weibull,
    moving_average,
    orthomartingale_check,
    product_factor_streams,
    product_rademacher,
    shift_field,
    spec_from_json,
    spec_to_json,
    spec_variance,
    weibull_tail_sample,
    zero_field,
)


def test_weibull_inverse_map_pinned_median():
    # P{|X| > ln 4} = 2 exp(-ln 4) = 1/2 when gamma = 1, checked on a
    # deterministic quantile grid rather than random draws.
    u = (np.arange(1, 100001) - 0.5) / 100000
    x = weibull_tail_sample(1.0, u)
    frac = np.mean(np.abs(x) > math.log(4.0))
    assert frac == pytest.approx(0.5, abs=1e-4)


def test_weibull_tail_matches_envelope():
    u = (np.arange(1, 200001) - 0.5) / 200000
    for gamma in (0.5, 1.0, 2.0):
        x = np.abs(weibull_tail_sample(gamma, u))
        for s in (0.9, 1.5, 2.5):
            want = min(1.0, 2.0 * math.exp(-(s**gamma)))
            got = float(np.mean(x > s))
            assert got == pytest.approx(want, abs=2e-4)


def test_weibull_sample_rejects_bad_input():
    with pytest.raises(InvalidRangeError):
        weibull_tail_sample(0.0, 0.5)
    with pytest.raises(InvalidRangeError):
        weibull_tail_sample(1.0, 0.0)
    with pytest.raises(InvalidRangeError):
        weibull_tail_sample(1.0, np.array([0.3, 1.0]))


def test_generate_deterministic_and_replica_streams():
    spec = iid_gaussian(2)
    a = generate(spec, (5, 6), SeedSpec(42, 3)).values
    b = generate(spec, (5, 6), SeedSpec(42, 3)).values
    c = generate(spec, (5, 6), SeedSpec(42, 4)).values
    d = generate(spec, (5, 6), SeedSpec(43, 3)).values
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_generate_batch_rows_match_single_replicas():
    spec = product_rademacher(2)
    batch = generate_batch(spec, (4, 4), 9, 10, 5)
    for j in range(5):
        single = generate(spec, (4, 4), SeedSpec(9, 10 + j)).values
        assert np.array_equal(batch[j], single)


@pytest.mark.parametrize(
    "spec",
    [
        iid_rademacher(2),
        product_rademacher(2),
        moving_average(2, axis=1),
        iid_weibull(2, 1.0),
    ],
    ids=["iid", "product", "moving-average", "weibull"],
)
def test_shift_field_is_window_slice(spec):
    # Shifting the window by k must read the same infinite field: the
    # shifted (3, 4) block equals the corresponding slice of a larger
    # unshifted block.
    seed = SeedSpec(2024, 1)
    big = generate(spec, (7, 9), seed).values
    shifted = shift_field(spec, (3, 4), seed, (2, 3)).values
    assert np.array_equal(shifted, big[2:5, 3:7])


def test_zero_field_generates_zeros():
    arr = generate(zero_field(3), (2, 3, 2), SeedSpec(1, 0)).values
    assert np.all(arr == 0.0)


def test_batch_centering():
    # Sample means over many replicas sit within 4 standard errors of 0.
    for spec in (iid_rademacher(1), iid_weibull(1, 1.0), moving_average(1)):
        batch = generate_batch(spec, (8,), 31, 0, 4000)
        mean = batch.mean()
        se = batch.std(ddof=1) / math.sqrt(batch.size)
        assert abs(mean) < 4 * se + 1e-12


def test_product_factor_streams_outer_product():
    spec = decoupled_product(3, dist="gaussian", sigma=1.0)
    seed = SeedSpec(5, 2)
    streams = product_factor_streams(spec, (3, 4, 5), seed)
    assert [len(s) for s in streams] == [3, 4, 5]
    outer = np.einsum("i,j,k->ijk", *streams)
    field = generate(spec, (3, 4, 5), seed).values
    assert np.allclose(outer, field, rtol=1e-15)


def test_product_factor_streams_rejects_iid():
    with pytest.raises(InvalidInputError):
        product_factor_streams(iid_rademacher(2), (3, 3), SeedSpec(1, 0))


def test_decoupled_product_kernel_values():
    assert decoupled_product_kernel(1.0, -1.0, 1.0) == -1.0
    assert decoupled_product_kernel(0.0, 5.0) == 0.0
    assert decoupled_product_kernel(3.0) == 3.0
    got = decoupled_product_kernel(np.array([1.0, 2.0]), np.array([3.0, -4.0]))
    assert np.array_equal(got, [3.0, -8.0])
    with pytest.raises(InvalidInputError):
        decoupled_product_kernel()


def test_kernel_degeneracy_monte_carlo():
    # Freezing all factors but one leaves a centered variable: the
    # conditional mean over the free factor vanishes for every fixed
    # value of the others.
    rng = np.random.default_rng(3)
    fixed = rng.choice([-1.0, 1.0], size=5)
    free = rng.choice([-1.0, 1.0], size=20000)
    prods = decoupled_product_kernel(free, np.prod(fixed))
    assert abs(np.mean(prods)) < 4.0 / math.sqrt(len(free))


def test_spec_json_round_trip():
    for spec in (
        iid_weibull(3, 0.5),
        moving_average(2, axis=2, dist="gaussian", sigma=2.0),
        product_rademacher(4),
        zero_field(1),
    ):
        text = spec_to_json(spec)
        back = spec_from_json(text)
        assert back == spec
        assert json.loads(text)["d"] == spec.d


def test_spec_from_json_rejects_malformed():
    with pytest.raises(InvalidInputError):
        spec_from_json("{not json")
    with pytest.raises(InvalidInputError):
        spec_from_json(json.dumps({"d": 2}))
    with pytest.raises(InvalidInputError):
        spec_from_json(json.dumps({"variant": "no_such_variant", "d": 2}))


def test_spec_variance_against_quadrature():
    # E X^2 = int_0^inf 2 s P{|X| > s} ds for the symmetric stretched
    # exponential tail.
    for gamma in (0.5, 1.0, 2.0):
        want, err = quad(
            lambda s, g=gamma: 2.0 * s * min(1.0, 2.0 * math.exp(-(s**g))),
            0.0,
            np.inf,
            limit=200,
        )
        got = spec_variance(iid_weibull(1, gamma))
        assert got == pytest.approx(want, rel=1e-8)
    assert spec_variance(iid_gaussian(2, sigma=3.0)) == 9.0
    assert spec_variance(product_rademacher(5)) == 1.0
    assert spec_variance(moving_average(1, dist="gaussian", sigma=1.0)) == 2.0
    assert spec_variance(zero_field(2)) == 0.0


def test_spec_variance_matches_monte_carlo():
    spec = iid_weibull(1, 1.0)
    batch = generate_batch(spec, (16,), 77, 0, 8000)
    m2 = float(np.mean(batch**2))
    se = float(np.std(batch**2, ddof=1)) / math.sqrt(batch.size)
    assert abs(m2 - spec_variance(spec)) < 5 * se


def test_orthomartingale_check_positive_controls():
    for spec in (iid_rademacher(2), product_rademacher(2), iid_gaussian(2)):
        res = orthomartingale_check(spec, (4, 4), SeedSpec(11, 0), replicas=2000)
        assert res.passed, spec.variant


def test_orthomartingale_check_negative_control():
    # A one-step moving average on axis 1 correlates with its own past
    # on that axis but stays centered against the other axis.
    spec = moving_average(2, axis=1)
    bad = orthomartingale_check(spec, (4, 4), SeedSpec(7, 0), replicas=3000, axes=[1])
    good = orthomartingale_check(spec, (4, 4), SeedSpec(7, 0), replicas=3000, axes=[2])
    assert not bad.passed
    assert good.passed
    report = bad.to_dict()
    assert report["passed"] is False
    assert len(report["rows"]) == len(bad.rows)


def test_orthomartingale_check_input_validation():
    with pytest.raises(InvalidInputError):
        orthomartingale_check(iid_rademacher(2), (4, 4), SeedSpec(1, 0), replicas=10)
    with pytest.raises(InvalidInputError):
        orthomartingale_check(
            iid_rademacher(2), (4, 4), SeedSpec(1, 0), replicas=2000, axes=[3]
        )
    with pytest.raises(InvalidInputError):
        orthomartingale_check(
            iid_rademacher(2), (4, 4), SeedSpec(1, 0), replicas=2000, sites=[(1, 1)]
        )


def test_generate_shape_mismatch():
    with pytest.raises(InvalidInputError):
        generate(iid_rademacher(2), (4,), SeedSpec(1, 0))
    with pytest.raises(InvalidInputError):
        generate_batch(iid_rademacher(1), (4,), 1, 0, 0)
