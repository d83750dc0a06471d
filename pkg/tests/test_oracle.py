"""Brute-force validators: ratio monotonicity, convexity, Monte Carlo."""

import dataclasses
import json
import math

import numpy as np
import pytest

from transform_orders import (
    HazardVector,
    convex_check,
    convexity_oracle,
    mc_survival,
    star_check,
    star_ratio_oracle,
    transform_values,
    violation_search,
    zoomed_concavity_grid,
    Status,
)

LAM = HazardVector((2, 3))
THETA = HazardVector((1.5, 3.5))


def ratio_grid(theta, points=5000):
    x_max = 5.0 / theta.rates[0]
    return np.linspace(x_max / points, x_max, points)


class TestStarRatioOracle:
    def test_identity_pair_is_flat(self):
        report = star_ratio_oracle(LAM, LAM, ratio_grid(LAM))
        assert not report.monotone_violations
        np.testing.assert_allclose(report.values, 1.0, atol=1e-9)

    def test_majorized_pair_clean(self):
        report = star_ratio_oracle(LAM, THETA, ratio_grid(THETA, 10_000))
        assert report.clean

    def test_reversed_pair_violates(self):
        report = star_ratio_oracle(THETA, LAM, ratio_grid(LAM, 10_000))
        assert report.monotone_violations

    def test_agrees_with_checker_on_verdicts(self):
        clean = star_ratio_oracle(LAM, THETA, ratio_grid(THETA)).clean
        assert clean == (star_check(LAM, THETA).status is not Status.FAILS)
        dirty = star_ratio_oracle(THETA, LAM, ratio_grid(LAM)).clean
        assert dirty == (star_check(THETA, LAM).status is not Status.FAILS)

    def test_rejects_nonpositive_grid(self):
        with pytest.raises(ValueError):
            star_ratio_oracle(LAM, THETA, np.linspace(0.0, 1.0, 10))


class TestConvexityOracle:
    def test_identity_pair_has_zero_curvature(self):
        grid = np.linspace(0.0, 3.0, 2001)
        report = convexity_oracle(LAM, LAM, grid)
        assert not report.convexity_violations
        np.testing.assert_allclose(report.values, grid, atol=1e-10)

    def test_homogeneous_base_is_convex(self):
        grid = np.linspace(0.0, 5.0 / THETA.rates[0], 100_001)
        report = convexity_oracle(HazardVector((2.5, 2.5)), THETA, grid)
        assert not report.convexity_violations

    def test_zoomed_window_reveals_concavity(self):
        window = violation_search(LAM, THETA).concavity_window()
        report = convexity_oracle(LAM, THETA, zoomed_concavity_grid(window))
        assert report.convexity_violations

    def test_concavity_found_iff_convex_check_fails(self):
        window = violation_search(LAM, THETA).concavity_window()
        found = bool(
            convexity_oracle(LAM, THETA, zoomed_concavity_grid(window))
            .convexity_violations
        )
        assert found == (convex_check(LAM, THETA).status is Status.FAILS)

    def test_rejects_nonuniform_grid(self):
        with pytest.raises(ValueError):
            convexity_oracle(LAM, THETA, np.geomspace(0.1, 1.0, 50))

    def test_transform_starts_at_origin(self):
        vals = transform_values(LAM, THETA, np.array([0.0, 1.0]))
        assert vals[0] == 0.0


class TestMcSurvival:
    def test_heterogeneous_pair_close_to_analytic(self):
        report = mc_survival(LAM, 1_000_000, seed=20240817)
        assert report.sup_distance < 0.005

    def test_single_exponential_matches_tail(self):
        report = mc_survival(HazardVector((1.0,)), 1_000_000, seed=3)
        assert report.sup_distance < 0.005
        for x, analytic in zip(report.grid_x, report.analytic):
            assert abs(analytic - math.exp(-x)) < 1e-12

    def test_seeded_reports_are_identical(self):
        a = mc_survival(LAM, 10_000, seed=99)
        b = mc_survival(LAM, 10_000, seed=99)
        assert json.dumps(dataclasses.asdict(a)) == json.dumps(dataclasses.asdict(b))

    def test_different_seeds_differ(self):
        a = mc_survival(LAM, 10_000, seed=1)
        b = mc_survival(LAM, 10_000, seed=2)
        assert a.sup_distance != b.sup_distance

    def test_rejects_tiny_sample_size(self):
        with pytest.raises(ValueError):
            mc_survival(LAM, 999, seed=0)
