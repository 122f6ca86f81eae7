"""Exit criteria of the build, one test each.

Every test prints a single ``ACn PASS|FAIL: ...`` line; the terminal summary
repeats the verdicts in one table.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

import conftest
from _oracles import random_distribution
from momentbounds import (
    BoundInput,
    DiscreteDistribution,
    PointMass,
    SupportBounds,
    affine_transform,
    cov_skew_of,
    d3_limits,
    decompose,
    dn_of_q,
    dn_of_z,
    invert_skew,
    make_bidisperse,
    mixture,
    mn_delta,
    mn_delta_derivative,
    recompose,
    sample_constrained,
    summarize,
)
from momentbounds.bidisperse import z_of_q

COUNTEREXAMPLE_DUMP = Path(__file__).resolve().parent.parent / "sweep_counterexamples.json"


def verdict(number: int, ok: bool, detail: str) -> None:
    print(f"AC{number} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


@pytest.mark.acceptance(1, "minimum skewness values at x_min = 0")
def test_ac1_minimum_skewness_values():
    at_04 = d3_limits(BoundInput(1.0, 0.4, SupportBounds(0.0))).lower
    at_1 = d3_limits(BoundInput(1.0, 1.0, SupportBounds(0.0))).lower
    err = max(abs(at_04 + 2.1), abs(at_1))
    verdict(1, err <= 1e-12, f"lower(0.4) = {at_04!r}, lower(1) = {at_1!r}, max error {err:.2e}")


@pytest.mark.acceptance(2, "symmetric support at three standard deviations")
def test_ac2_symmetric_support():
    worst = 0.0
    for mu, sigma in [(1.0, 0.25), (0.0, 1.0), (-3.5, 2.0), (100.0, 7.0)]:
        r = d3_limits(BoundInput(mu, sigma, SupportBounds(mu - 3 * sigma, mu + 3 * sigma)))
        worst = max(worst, abs(r.lower + 8 / 3), abs(r.upper - 8 / 3))
    verdict(2, worst <= 1e-12, f"max deviation from [-8/3, 8/3] is {worst:.2e}")


@pytest.mark.acceptance(3, "q-form and z-form of D_n agree")
def test_ac3_q_and_z_forms_agree():
    grid = np.linspace(0.001, 0.999, 1000)
    start = time.perf_counter()
    worst = 0.0
    for n in range(3, 9):
        for q in grid:
            a = dn_of_q(n, float(q))
            b = dn_of_z(n, z_of_q(float(q)))
            worst = max(worst, abs(a - b) / abs(a))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 1.0
    verdict(3, ok, f"max relative difference {worst:.2e} over 6000 evaluations in {elapsed:.3f} s")


@pytest.mark.acceptance(4, "decomposition round trip")
def test_ac4_decomposition_round_trip():
    rng = np.random.default_rng(404)
    worst_p = worst_mean = 0.0
    bad_components = 0
    for _ in range(500):
        d = random_distribution(rng, int(rng.integers(2, 13)))
        dec = decompose(d)
        back = recompose(dec)
        assert back.values == d.values
        worst_p = max(worst_p, max(abs(a - b) for a, b in zip(back.probabilities, d.probabilities)))
        for comp, _ in dec.components:
            if isinstance(comp, PointMass):
                bad_components += comp.value != d.mean
                continue
            bad_components += not (comp.a_minus < d.mean < comp.a_plus)
            worst_mean = max(worst_mean, abs(comp.mean - d.mean) / max(1.0, abs(d.mean)))
    ok = worst_p <= 1e-12 and worst_mean <= 1e-12 and bad_components == 0
    verdict(
        4, ok,
        f"max probability error {worst_p:.2e}, max component mean error {worst_mean:.2e}, "
        f"{bad_components} malformed components",
    )


def third_moment_slack(d: DiscreteDistribution, mu: float) -> float:
    s = summarize(d, 3)
    var = s.std**2
    # m3 - mu^3 (delta^4 - delta^2) with delta = sigma / mu
    return s.central(3) - (var * var / mu - mu * var)


@pytest.mark.acceptance(5, "mixture closure of the third-moment floor")
def test_ac5_mixture_closure():
    rng = np.random.default_rng(505)
    alphas = [i / 10 for i in range(1, 10)]
    worst_component = worst_mixture = math.inf
    for _ in range(1000):
        mu = float(rng.uniform(0.5, 2.0))
        support = SupportBounds(0.0, mu * float(rng.uniform(2.0, 10.0)))
        r = sample_constrained(int(rng.integers(2, 6)), support, mu, rng)
        s = sample_constrained(int(rng.integers(2, 6)), support, mu, rng)
        worst_component = min(worst_component, third_moment_slack(r, r.mean), third_moment_slack(s, s.mean))
        for a in alphas:
            t = mixture([(r, a), (s, 1 - a)])
            worst_mixture = min(worst_mixture, third_moment_slack(t, t.mean))
    ok = worst_component >= -1e-10 and worst_mixture >= -1e-10
    verdict(5, ok, f"min slack: components {worst_component:.3e}, mixtures {worst_mixture:.3e} (9000 mixtures)")


@pytest.mark.acceptance(6, "desk-scale sweep on [0, 5] with mean 1")
def test_ac6_desk_sweep(desk_sweep):
    records, elapsed = desk_sweep
    proven_bad = sum(r.n_violations for r in records if r.order == 3)
    proven_bad += sum(r.n_below for r in records if r.order == 4)
    conjectured_bad = sum(r.n_violations for r in records if r.order == 5)
    ceiling_d4 = sum(r.n_above for r in records if r.order == 4)
    max_delta = max(r.max_delta for r in records)
    top_lo = max(r.delta_bin_lo for r in records)
    top = max((r for r in records if r.order == 4 and r.delta_bin_lo == top_lo), key=lambda r: r.max_delta)
    d4_gap = abs(top.value_at_max_delta - 3.25) / 3.25

    bad = [c for r in records for c in r.violations if c.order == 3 or c.order == 5 or c.value < c.lower]
    if bad:
        COUNTEREXAMPLE_DUMP.write_text(
            json.dumps(
                [
                    {
                        "order": c.order, "family": c.family, "delta": c.delta, "value": c.value,
                        "lower": c.lower, "upper": c.upper, "status": c.status,
                        "distribution": c.distribution.to_json_dict(),
                    }
                    for c in bad
                ],
                indent=2,
            )
        )
    ok = (
        elapsed < 60.0
        and proven_bad == 0
        and conjectured_bad == 0
        and max_delta <= 2.0 + 1e-9
        and d4_gap <= 0.02
    )
    detail = (
        f"{elapsed:.1f} s, proven violations {proven_bad}, D5 violations {conjectured_bad}, "
        f"D4 ceiling violations {ceiling_d4}, max delta {max_delta:.6f}, "
        f"top-bin D4 {top.value_at_max_delta:.4f} ({top.family}, {100 * d4_gap:.2f}% from 3.25)"
    )
    if bad:
        detail += f"; counterexamples written to {COUNTEREXAMPLE_DUMP}"
    verdict(6, ok, detail)


@pytest.mark.acceptance(7, "skewness inversion round trip")
def test_ac7_inversion_round_trip():
    rng = np.random.default_rng(707)
    worst = 0.0
    for _ in range(1000):
        eta, q, mu = rng.uniform(1.0, 50.0), rng.uniform(0.01, 0.99), rng.uniform(0.1, 10.0)
        spec = make_bidisperse(float(mu), float(eta), float(q))
        cov, skew = cov_skew_of(spec)
        back = invert_skew(spec.mean, cov, skew)
        for got, want in ((back.a_minus, spec.a_minus), (back.a_plus, spec.a_plus), (back.q, spec.q)):
            worst = max(worst, abs(got - want) / abs(want))
    verdict(7, worst <= 1e-9, f"max relative error {worst:.2e}")


@pytest.mark.acceptance(8, "Pearson floor on every generated distribution")
@pytest.mark.run_last
def test_ac8_pearson_floor_everywhere(desk_sweep):
    worst = math.inf
    checked = 0
    for d in conftest.CREATED:
        if d.size < 2:
            continue
        s = summarize(d, 4)
        if s.std == 0:
            continue
        worst = min(worst, s.kurtosis - s.skewness**2 - 1)
        checked += 1
    records, _ = desk_sweep
    sweep_worst = min(r.min_pearson_gap for r in records)
    sweep_count = sum(r.n_samples for r in records if r.order == records[0].order)
    ok = worst >= -1e-9 and sweep_worst >= -1e-9
    verdict(
        8, ok,
        f"{checked} constructed distributions (min gap {worst:.2e}), "
        f"{sweep_count} sweep samples (min gap {sweep_worst:.2e})",
    )


@pytest.mark.acceptance(9, "derivative of m_n in the lower gap")
def test_ac9_derivative_contract():
    rng = np.random.default_rng(909)
    worst = 0.0
    sign_failures = 0
    for _ in range(500):
        n = int(rng.integers(3, 9))
        cov = float(rng.uniform(0.05, 3.0))
        gap = float(rng.uniform(0.05, 3.0))
        h = 1e-6 * max(1.0, gap)
        fd = (mn_delta(n, cov, gap + h) - mn_delta(n, cov, gap - h)) / (2 * h)
        an = mn_delta_derivative(n, cov, gap)
        worst = max(worst, abs(fd - an) / abs(an))
        if n % 2:
            sign_failures += not an < 0
        else:
            sign_failures += not (an < 0 if gap < cov else an > 0)
            below = mn_delta_derivative(n, cov, cov * (1 - 1e-6))
            above = mn_delta_derivative(n, cov, cov * (1 + 1e-6))
            sign_failures += not (below < 0 < above)
    # m_2 / mean^2 = cov^2 whatever the gap, so its derivative vanishes identically
    flat = 0.0
    for _ in range(100):
        cov, gap = float(rng.uniform(0.05, 3.0)), float(rng.uniform(0.05, 3.0))
        h = 1e-6 * max(1.0, gap)
        fd = (mn_delta(2, cov, gap + h) - mn_delta(2, cov, gap - h)) / (2 * h)
        flat = max(flat, abs(mn_delta_derivative(2, cov, gap)) / cov**2, abs(fd) / cov**2)
    ok = worst <= 1e-6 and sign_failures == 0 and flat <= 1e-6
    verdict(
        9, ok,
        f"max relative finite-difference error {worst:.2e}, {sign_failures} sign failures, "
        f"order-2 derivative at most {flat:.1e} of cov^2",
    )


@pytest.mark.acceptance(10, "shift and scale invariance of D_n")
def test_ac10_invariance():
    rng = np.random.default_rng(1010)
    worst = 0.0
    for _ in range(1000):
        d = random_distribution(rng, int(rng.integers(2, 9)))
        shift = float(rng.uniform(-100, 100))
        scale = float(10 ** rng.uniform(-2, 2)) * float(rng.choice([-1.0, 1.0]))
        base = summarize(d, 8)
        shifted = summarize(affine_transform(d, 1.0, shift), 8)
        scaled = summarize(affine_transform(d, scale, 0.0), 8)
        for n in range(3, 9):
            ref = base.standardized_moment(n)
            sign = math.copysign(1.0, scale) if n % 2 else 1.0
            for got, want in ((shifted.standardized_moment(n), ref), (scaled.standardized_moment(n), sign * ref)):
                worst = max(worst, abs(got - want) / abs(want))
    verdict(10, worst <= 1e-10, f"max relative deviation {worst:.2e} over 12000 comparisons")
