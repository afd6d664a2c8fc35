"""Acceptance gate: one test per shipped criterion.

Each test prints an ACCEPTANCE line with the measured numbers before
asserting, so the -v listing gives one verdict line per criterion and
failures carry the measured values in the captured output.
"""

import math
import time

import numpy as np
import pytest

from orthofield import (
    DyadicSite,
    ExperimentConfig,
    cond_wip_check,
    dyadic_sites,
    eval_W,
    fdd_compare,
    from_field,
    full_grid_count,
    grid_value,
    iid_gaussian,
    iid_rademacher,
    iid_weibull,
    induction_step_check,
    lemma11_check,
    lemma3_moment_sum,
    lemma_svarying_partial_sum,
    level_set_count,
    log_power,
    iter_log,
    max_abs_prefix,
    mc_deviation,
    prefix_sum,
    product_rademacher,
    pyramid_eval,
    recurse_constants,
    rect_sum,
    schauder_coeff,
    sheet_cov_check,
    tightness_experiment,
    unit_tail,
    verify_bound,
    vpm,
    weibull_envelope,
)
from orthofield.harness import exponent_fit_experiment
from orthofield.holder import _level_k_array

E9 = math.exp(9.0)


def brute_prefix(field):
    out = np.zeros_like(field)
    for idx in np.ndindex(*field.shape):
        total = 0.0
        for src in np.ndindex(*(i + 1 for i in idx)):
            total += field[src]
        out[idx] = total
    return out


def test_criterion_01_exact_arithmetic_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)

    # prefix/rect/max-abs against nested-loop oracles, 200 instances
    for _ in range(200):
        d = int(rng.integers(1, 4))
        shape = tuple(int(n) for n in rng.integers(1, 7, size=d))
        field = rng.integers(-9, 10, size=shape).astype(np.float64)
        want = brute_prefix(field)
        assert np.array_equal(prefix_sum(field), want)
        assert max_abs_prefix(field) == np.max(np.abs(want))
        lo = tuple(int(rng.integers(1, n + 1)) for n in shape)
        hi = tuple(int(rng.integers(l, n + 1)) for l, n in zip(lo, shape))
        box = want[tuple(h - 1 for h in hi)]
        total = 0.0
        for idx in np.ndindex(*shape):
            if all(l - 1 <= i <= h - 1 for i, l, h in zip(idx, lo, hi)):
                total += field[idx]
        assert rect_sum(prefix_sum(field), lo, hi) == total

    # grid identity of the interpolated process
    for shape in [(5,), (4, 7), (3, 4, 5)]:
        field = rng.standard_normal(shape)
        p = from_field(field)
        for k in np.ndindex(*(n + 1 for n in shape)):
            t = tuple(kq / nq for kq, nq in zip(k, shape))
            assert eval_W(p, t) == pytest.approx(grid_value(p, k), rel=1e-12, abs=1e-12)

    # Schauder coefficients annihilate 10^3 random affine maps
    for _ in range(1000):
        a = rng.normal()
        b = rng.normal(size=2)
        affine = lambda pts, a=a, b=b: a + np.atleast_2d(pts) @ b
        j = int(rng.integers(1, 5))
        sites = dyadic_sites(j, 2)
        site = sites[int(rng.integers(0, len(sites)))]
        assert abs(schauder_coeff(affine, site)) <= 1e-12

    # pyramid delta property, exact, sampled rows per level
    for d in (1, 2, 3):
        for j in range(0, 6):
            k = _level_k_array(j, d)
            coords = k.astype(np.float64) / (1 << j)
            m = len(k)
            stride = max(1, m // 60)
            for row in range(0, m, stride):
                vals = pyramid_eval(DyadicSite(j, tuple(k[row])), coords)
                want = np.zeros(m)
                want[row] = 1.0
                assert np.array_equal(vals, want)

    # parent midpoint identity, exact
    for d in (1, 2, 3):
        for j in (1, 2, 3):
            sites = dyadic_sites(j, d)
            for site in sites[:: max(1, len(sites) // 40)]:
                lo, hi = vpm(site)
                assert np.array_equal((lo.coords + hi.coords) / 2.0, site.coords)

    # level-count formula, exact integers up to j = 10
    for d in (1, 2, 3):
        for J in range(0, 11):
            assert sum(level_set_count(j, d) for j in range(J + 1)) == full_grid_count(J, d)
    for d in (1, 2):
        for j in (0, 1, 2, 3, 4):
            assert level_set_count(j, d) == len(dyadic_sites(j, d))

    elapsed = time.perf_counter() - t0
    print("ACCEPTANCE 1: PASS - exact arithmetic suite in %.2fs" % elapsed)
    assert elapsed < 1.0


def test_criterion_02_constants_recursion():
    consts = {d: recurse_constants(d) for d in range(1, 7)}
    rows = {lvl: (K, M, drift) for lvl, K, M, _, drift in consts[6].K_levels}
    summary = ", ".join(
        "d=%d: A=%.4g C=%.6g" % (d, consts[d].A, consts[d].C) for d in range(2, 7)
    )
    print("ACCEPTANCE 2: measured %s" % summary)

    for d in range(1, 7):
        assert consts[d].p == 2 * d
    assert consts[2].C == 1.0 / 16.0
    for lvl, (K, M, drift) in rows.items():
        assert drift < 0.01, "K_%d grid sup still drifting" % lvl

    # The two pins below do not hold for any faithful realization of the
    # recursion; the measured values and the resolution analysis are in
    # the decisions ledger.  They are asserted as written so the gate
    # stays honest.
    assert consts[3].C == 1.0 / 128.0, (
        "pinned C_3 = 1/128, measured C_3 = %.12g = 1/(64 sqrt(2)); the "
        "per-level factor is 4 sqrt(2), not 8" % consts[3].C
    )
    for d in range(2, 7):
        assert consts[d].A == E9, (
            "pinned A_%d = e^9, measured %.6g; from level 4 the recursion "
            "term A_{d-1}/5 + 2 B_{d-1} exceeds the floor" % (d, consts[d].A)
        )
    print("ACCEPTANCE 2: PASS")


def test_criterion_03_bounded_tail_domination():
    x_grid = tuple(48.0 + 96.0 * i / 9 for i in range(10))  # threshold .. +6K/C
    prod_cfg = ExperimentConfig(
        experiment="verify-bound", generator=product_rademacher(2), shape=(64, 64),
        x_grid=x_grid, replicas=100000, seed=101, threads=4,
        bound={"kind": "bounded", "K": 1.0},
    )
    prod = verify_bound(prod_cfg)
    iid_cfg = ExperimentConfig(
        experiment="verify-bound", generator=iid_rademacher(2), shape=(64, 64),
        x_grid=x_grid, replicas=100000, seed=101, threads=4,
        bound={"kind": "two-term", "y": 16.0, "tail": {"kind": "bounded", "K": 1.0}},
    )
    iid = verify_bound(iid_cfg)
    print(
        "ACCEPTANCE 3: %s/%s - product and iid Rademacher at 1e5 replicas, "
        "informative points %d/%d"
        % (prod.verdict, iid.verdict, prod.counts["informative_points"],
           iid.counts["informative_points"])
    )
    assert prod.verdict == "PASS"
    assert iid.verdict == "PASS"
    for rep in (prod, iid):
        for row in rep.rows:
            assert row["ok"], row


def test_criterion_04_large_deviation_domination():
    verdicts = []
    for shape in [(32, 32), (64, 64)]:
        cfg = ExperimentConfig(
            experiment="verify-bound", generator=iid_weibull(2, 1.0), shape=shape,
            x_grid=(0.25, 0.5, 1.0), replicas=20000, seed=101, threads=4,
            bound={"kind": "large-deviation", "gamma": 1.0},
        )
        rep = verify_bound(cfg)
        verdicts.append(rep.verdict)
        for row in rep.rows:
            assert row["ci_hi"] <= row["bound"], row
    print("ACCEPTANCE 4: %s - stretched-exponential field, both lattice sizes"
          % "/".join(verdicts))
    assert all(v == "PASS" for v in verdicts)


def test_criterion_05_doob_step_inequality():
    x_grid = tuple(0.25 + 0.25 * i for i in range(10))
    verdicts = []
    for gen in (product_rademacher(2), iid_gaussian(2)):
        cfg = ExperimentConfig(
            experiment="induction-check", generator=gen, shape=(32, 32),
            x_grid=x_grid, replicas=4000, seed=505, threads=4,
        )
        rep = induction_step_check(cfg)
        verdicts.append(rep.verdict)
    print("ACCEPTANCE 5: %s - slab comparison on 10-point grid" % "/".join(verdicts))
    assert all(v == "PASS" for v in verdicts)


def test_criterion_06_increment_inequality_battery():
    rng = np.random.default_rng(606)
    violations = 0
    for _ in range(1000):
        d = int(rng.integers(2, 4))
        shape = tuple(int(n) for n in rng.integers(1, 17, size=d))
        p = from_field(rng.standard_normal(shape))
        t, tp = np.sort(rng.uniform(0.0, 1.0, size=2))
        if tp <= t:
            tp = min(1.0, t + 1e-3)
        if not lemma11_check(p, float(t), float(tp)).holds:
            violations += 1
    print("ACCEPTANCE 6: %s - %d violations in 1000 instances"
          % ("PASS" if violations == 0 else "FAIL", violations))
    assert violations == 0


def test_criterion_07_exponent_bands():
    results = []
    for d, band in [(1, (1.7, 2.3)), (2, (0.7, 1.3)), (3, (0.45, 0.9))]:
        cfg = ExperimentConfig(
            experiment="exponent-fit", d=d, replicas=1000000, seed=101,
            window=(0.999, 0.99999), band=band,
        )
        rep = exponent_fit_experiment(cfg)
        results.append((d, rep.rows[0]["gamma_hat"], band, rep.verdict))
    print("ACCEPTANCE 7: " + "; ".join(
        "d=%d fit %.3f in [%.2f, %.2f] %s" % (d, g, b[0], b[1], v)
        for d, g, b, v in results
    ))
    for d, g, band, verdict in results:
        assert verdict == "PASS", (d, g, band)


def test_criterion_08_fdd_and_sheet():
    points = [(1.0, 1.0), (0.5, 1.0), (0.25, 0.75)]
    checks = []
    for gen, shape in [
        (iid_gaussian(2), (16, 16)),
        (iid_weibull(2, 1.0), (16, 16)),
        (iid_rademacher(2), (64, 64)),
    ]:
        for t in points:
            cfg = ExperimentConfig(
                experiment="fdd", generator=gen, shape=shape, t_point=t,
                replicas=10000, seed=808, threads=4,
            )
            rep = fdd_compare(cfg)
            checks.append((gen.variant, t, rep.rows[0]["ks_stat"], rep.verdict))
    neg_cfg = ExperimentConfig(
        experiment="fdd", generator=product_rademacher(2), shape=(128, 128),
        t_point=(1.0, 1.0), replicas=10000, seed=808, threads=4,
    )
    neg = fdd_compare(neg_cfg)
    sheet = sheet_cov_check(ExperimentConfig(
        experiment="sheet-cov", shape=(8, 8), replicas=3000, seed=17, pairs=10,
    ))
    worst = max(ks for _, _, ks, _ in checks)
    print(
        "ACCEPTANCE 8: iid fdd worst KS %.4f (all PASS: %s); product control %s "
        "at KS %.4f; sheet covariance %s"
        % (worst, all(v == "PASS" for *_, v in checks), neg.verdict,
           neg.rows[0]["ks_stat"], sheet.verdict)
    )
    for variant, t, ks, verdict in checks:
        assert verdict == "PASS", (variant, t, ks)
    assert neg.verdict == "FAIL"
    assert sheet.verdict == "PASS"
    for row in sheet.rows:
        assert abs(row["z"]) <= 3.0


def test_criterion_09_tightness_sums():
    base = dict(
        experiment="tightness", generator=iid_gaussian(2), exponents=(8, 8),
        eps=1.0, axis_q=1, j_from=2, replicas=400, seed=909,
        modulus={"c": math.exp(4.0), "L": {"kind": "iter_log"}},
    )
    one = tightness_experiment(ExperimentConfig(threads=1, **base))
    eight = tightness_experiment(ExperimentConfig(threads=8, **base))
    sums = one.rows[-1]["tail_sums"]
    seq = [sums[str(j)] for j in range(2, 6)]
    print(
        "ACCEPTANCE 9: tail sums J=2..5 = %s (nonincreasing: %s); "
        "threads 1 vs 8 identical: %s"
        % (seq, all(a >= b for a, b in zip(seq, seq[1:])),
           one.canonical_json() == eight.canonical_json())
    )
    assert all(a >= b for a, b in zip(seq, seq[1:]))
    assert one.canonical_json() == eight.canonical_json()


def test_criterion_10_slowly_varying_lemmas():
    trends = []
    for L, name in [(log_power(1.0), "log-power-1"), (iter_log(), "iter-log")]:
        ratios = lemma_svarying_partial_sum(L, 40)["ratios"]
        window = ratios[29:40]
        slope = float(np.polyfit(np.arange(len(window)), window, 1)[0])
        trends.append((name, max(window), slope))
    wip = cond_wip_check(log_power(2.0), weibull_envelope(1.0), 1.0, 60)
    moments = lemma3_moment_sum(log_power(2.0), weibull_envelope(1.0), 1.0, 30)
    wip_unit = cond_wip_check(log_power(2.0), unit_tail(), 1.0, 30)
    moments_unit = lemma3_moment_sum(log_power(2.0), unit_tail(), 1.0, 10)
    print(
        "ACCEPTANCE 10: trends %s; converging pair (%s, %s); unit-tail "
        "control diverges (%s, %s)"
        % (["%s max %.3f slope %.1e" % t for t in trends],
           wip["converged"], moments["converged"],
           not wip_unit["converged"], not moments_unit["converged"])
    )
    for name, peak, slope in trends:
        assert peak < 10.0, name
        assert slope <= 1e-3, (name, slope)
    assert wip["converged"] and moments["converged"]
    assert not wip_unit["converged"]
    assert not moments_unit["converged"] and moments_unit["diverged_levels"]


def test_criterion_11_reproducibility():
    dev = dict(
        experiment="deviation", generator=iid_gaussian(2), shape=(16, 16),
        x_grid=(0.5, 1.0, 2.0), replicas=2000, seed=77,
    )
    fdd = dict(
        experiment="fdd", generator=iid_gaussian(2), shape=(16, 16),
        t_point=(1.0, 1.0), replicas=2000, seed=77,
    )
    outcomes = []
    for base, runner in [(dev, mc_deviation), (fdd, fdd_compare)]:
        one = runner(ExperimentConfig(threads=1, **base))
        eight = runner(ExperimentConfig(threads=8, **base))
        rerun = runner(ExperimentConfig(threads=1, **base))
        outcomes.append(
            one.canonical_json() == eight.canonical_json() == rerun.canonical_json()
        )
    print("ACCEPTANCE 11: byte-identical payloads across threads and reruns: %s"
          % outcomes)
    assert all(outcomes)
