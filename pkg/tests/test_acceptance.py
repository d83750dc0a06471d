"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Every tolerance is pinned here; nothing is deferred to calibration.
"""

import json
import time
from decimal import Decimal, getcontext

import numpy as np

from transform_orders import (
    HazardVector,
    Status,
    convex_check,
    convexity_oracle,
    count_roots,
    dVda,
    inverse_survival,
    mc_survival,
    star_check,
    star_check_n,
    star_ratio_oracle,
    survival,
    survival_gap,
    violation_search,
    zoomed_concavity_grid,
)
from transform_orders.cli import EXIT_FAILS, RunConfig, run

from _samplers import random_expsum, random_hazard, random_majorized_pair

LAM = HazardVector((2, 3))
THETA = HazardVector((1.5, 3.5))


def report(number, ok, text):
    print(f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"criterion {number} failed: {text}"


def test_criterion_1_counterexample_reproduction():
    started = time.perf_counter()
    rep = violation_search(LAM, THETA)
    ok = (
        0.5 < rep.a < 0.75
        and rep.b > 0.0
        and rep.pattern.signs() == ("+", "-", "+", "-")
        and rep.pattern.certified
        and all(abs(r.value) > 1e-18 for r in rep.pattern.regions)
    )
    code, text = run(
        RunConfig(command="check-convex", lam=[2, 3], theta=[1.5, 3.5],
                  a=0.749, b=0.0125, out=None)
    )
    witness = json.loads(text)["witness"]
    ok = ok and code == EXIT_FAILS
    ok = ok and [r["sign"] for r in witness["pattern"]] == ["+", "-", "+", "-"]
    ok = ok and all(r["certain"] for r in witness["pattern"])
    elapsed = time.perf_counter() - started
    ok = ok and elapsed < 60.0
    report(
        1,
        ok,
        f"search hit (a={rep.a:.6f}, b={rep.b:.6g}) in the strip (0.5, 0.75), "
        f"direct point check certified '+,-,+,-', {elapsed:.1f}s < 60s",
    )


def test_criterion_2_star_order_under_majorization():
    started = time.perf_counter()
    rng = np.random.default_rng(2024)
    holds = violations = 0
    for _ in range(100):
        lam, theta = random_majorized_pair(rng)
        verdict = star_check(lam, theta)
        holds += verdict.status is Status.HOLDS
        x_max = 5.0 / theta.rates[0]
        grid = np.linspace(x_max / 10_000, x_max, 10_000)
        violations += len(star_ratio_oracle(lam, theta, grid).monotone_violations)
    elapsed = time.perf_counter() - started
    ok = holds == 100 and violations == 0 and elapsed < 120.0
    report(
        2,
        ok,
        f"{holds}/100 random majorized pairs HOLD, {violations} ratio violations "
        f"on 10^4-point grids, {elapsed:.1f}s < 120s",
    )


def test_criterion_3_homogeneous_versus_heterogeneous():
    homog = HazardVector((2.5, 2.5))
    grid = np.linspace(0.0, 5.0 / THETA.rates[0], 100_001)
    oracle = convexity_oracle(homog, THETA, grid, concavity_tol=1e-9)
    verdict = convex_check(homog, THETA)
    ok = not oracle.convexity_violations and verdict.status is not Status.FAILS
    report(
        3,
        ok,
        f"no concave stretch beyond 1e-9 on 10^5 points, convex_check gives "
        f"{verdict.status.value} with certificate {verdict.certificate!r}",
    )


def test_criterion_4_concave_interval_detection():
    window = violation_search(LAM, THETA).concavity_window()
    oracle = convexity_oracle(
        LAM, THETA, zoomed_concavity_grid(window, 10_000), concavity_tol=1e-9
    )
    worst = max((m for _, m in oracle.convexity_violations), default=0.0)
    ok = bool(oracle.convexity_violations)
    report(
        4,
        ok,
        f"{len(oracle.convexity_violations)} concave second differences in the "
        f"zoom window ({window[0]:.3f}, {window[1]:.3f}), worst dip {worst:.2e}",
    )


def test_criterion_5_zero_bound_property():
    rng = np.random.default_rng(5)
    worst_margin = None
    for _ in range(1000):
        f = random_expsum(rng, max_terms=6)
        scan = count_roots(f, -30.0, 80.0)
        bound = f.sign_change_bound()
        if scan.count > bound:
            report(5, False, f"{scan.count} roots exceed bound {bound} for {f.terms()}")
        margin = bound - scan.count
        worst_margin = margin if worst_margin is None else min(worst_margin, margin)
    report(
        5,
        True,
        f"1000 random sums: root count never exceeded the sign-change bound "
        f"(tightest margin {worst_margin})",
    )


def test_criterion_6_scale_derivative_identity():
    # The compared system's terms cancel exactly in the a-difference, so a
    # high-precision central difference of the shifted base survival is an
    # adequate independent oracle at any magnitude.
    getcontext().prec = 50
    h = Decimal("1e-6")

    def survival_dec(rates, t):
        r1, r2 = (Decimal(repr(r)) for r in rates)
        return (-r1 * t).exp() + (-r2 * t).exp() - (-(r1 + r2) * t).exp()

    rng = np.random.default_rng(6)
    worst = 0.0
    positive = True
    for _ in range(1000):
        lam = random_hazard(rng, 2)
        x = Decimal(repr(float(rng.uniform(1e-3, 8.0))))
        a = Decimal(repr(float(rng.uniform(0.1, 2.5))))
        b = Decimal(repr(float(rng.uniform(0.0, 1.5))))
        got = dVda(lam, float(x), float(a), float(b))
        positive = positive and got > 0.0
        fd = -(
            survival_dec(lam.rates, (a + h) * x + b)
            - survival_dec(lam.rates, (a - h) * x + b)
        ) / (2 * h)
        worst = max(worst, abs(got - float(fd)) / abs(float(fd)))
    ok = positive and worst <= 1e-6
    report(
        6,
        ok,
        f"1000 samples: strictly positive, worst relative FD mismatch {worst:.2e} <= 1e-6",
    )


def test_criterion_7_survival_against_monte_carlo():
    sups = []
    for rates in ((2, 3), (1, 2, 3)):
        rep = mc_survival(HazardVector(rates), 1_000_000, seed=20240817)
        sups.append(rep.sup_distance)
    ok = all(s < 0.005 for s in sups)
    report(
        7,
        ok,
        f"sup |empirical - analytic| = {sups[0]:.4f} for (2,3) and {sups[1]:.4f} "
        f"for (1,2,3) with N=10^6, both < 0.005",
    )


def test_criterion_8_quantile_round_trip():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(20):
        f = survival(random_hazard(rng))
        for u in rng.uniform(1e-6, 1.0, 100):
            worst = max(worst, abs(f.eval(inverse_survival(f, float(u))) - u))
    ok = worst <= 1e-12
    report(
        8,
        ok,
        f"20 systems x 100 levels: worst round-trip residual {worst:.2e} <= 1e-12",
    )


def test_criterion_9_scale_invariance():
    rng = np.random.default_rng(9)
    ok = True
    for _ in range(20):
        lam, theta = random_majorized_pair(rng)
        base = star_check(lam, theta).status
        for k in (0.5, 2.0, 10.0):
            ok = ok and star_check(lam.scaled(k), theta.scaled(k)).status is base
    report(9, ok, "star_check status unchanged under joint scaling by 0.5, 2, 10")


def test_criterion_10_open_problem_mode():
    verdict = star_check_n(HazardVector((2, 3, 4)), HazardVector((1, 3, 5)))
    ok = verdict.status is Status.INCONCLUSIVE and "consistent" in verdict.detail
    report(
        10,
        ok,
        f"n=3 scan returns {verdict.status.value} ({verdict.detail[:60]}...)",
    )
