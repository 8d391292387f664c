import math

import numpy as np
import pytest

from voronoi_boundary import mc_sim, moments
from voronoi_boundary.quadrature import QuadSpec
from voronoi_boundary.void_geometry import SeedLocation


class TestMeanCorner:
    def test_closed_form(self):
        m = moments.mean_corner()
        expected = math.acos(2.0 / math.pi) / math.sqrt(math.pi**2 - 4.0)
        assert m.value == expected
        assert abs(m.value - 0.36351) < 1e-5
        assert m.method == "closed_form"
        assert m.location == SeedLocation.corner()

    def test_quadrature_cross_check(self):
        quad = moments.mean_quadrant(0.0)
        assert abs(quad.value - moments.CORNER_MEAN) < 1e-8


class TestMeanEdge:
    def test_value(self):
        m = moments.mean_edge()
        assert abs(m.value - 0.61082) < 1e-5

    def test_below_log_two(self):
        assert moments.mean_edge().value < math.log(2.0)

    def test_halfplane_consistency(self):
        assert abs(moments.mean_edge().value - moments.mean_halfplane(0.0).value) < 1e-6


class TestMeanQuadrant:
    def test_edge_limit(self):
        m = moments.mean_quadrant(5.0)
        assert abs(m.value - 0.61082) < 0.005

    def test_crossover_beyond_eight(self):
        m = moments.mean_quadrant(9.0)
        assert m.value == moments.mean_edge().value
        assert m.location.offset == 9.0

    def test_monte_carlo_oracle(self):
        a = 1.5
        analytic = moments.mean_quadrant(a)
        cfg = mc_sim.SimConfig(
            side_L=10.0, intensity=1.0, seed0=(a, 0.0), trials=20_000, rng_seed=101
        )
        sim = mc_sim.simulate_cell_area(cfg, workers=1)
        assert abs(analytic.value - sim.mean) < 3.0 * sim.std_err_mean

    def test_negative_offset(self):
        with pytest.raises(ValueError):
            moments.mean_quadrant(-0.5)


class TestMeanHalfplane:
    def test_edge_value(self):
        assert abs(moments.mean_halfplane(0.0).value - 0.61082) < 1e-5

    def test_exceeds_unity_near_boundary(self):
        assert moments.mean_halfplane(1.0).value > 1.0

    def test_bulk_limit(self):
        assert abs(moments.mean_halfplane(4.0).value - 1.0) < 0.01

    def test_monte_carlo_oracle(self):
        h = 1.0
        analytic = moments.mean_halfplane(h)
        cfg = mc_sim.SimConfig(
            side_L=10.0, intensity=1.0, seed0=(5.0, h), trials=20_000, rng_seed=202
        )
        sim = mc_sim.simulate_cell_area(cfg, workers=1)
        assert abs(analytic.value - sim.mean) < 3.0 * sim.std_err_mean


class TestBounds:
    def test_upper_collapses_at_zero(self):
        assert abs(
            moments.upper_bound_mean_quadrant(0.0).value - moments.CORNER_MEAN
        ) < 1e-13

    def test_upper_limit(self):
        assert abs(moments.upper_bound_mean_quadrant(50.0).value - 0.86351) < 1e-5

    def test_lower_trivials(self):
        assert moments.lower_bound_mean_quadrant(0.0).value == 0.25
        assert abs(moments.lower_bound_mean_quadrant(40.0).value - 0.5) < 1e-14

    def test_ordering_coarse_grid(self):
        for a in (0.3, 1.0, 2.0, 4.0):
            lower = moments.lower_bound_mean_quadrant(a).value
            upper = moments.upper_bound_mean_quadrant(a).value
            mean = moments.mean_quadrant(a).value
            assert lower < mean < upper < 1.0

    def test_boundh_zero_uses_trivial_branch(self):
        assert moments.lower_bound_mean_halfplane(0.0).value == 0.5

    def test_boundh_exceeds_unity_at_one(self):
        assert moments.lower_bound_mean_halfplane(1.0).value > 1.0

    def test_boundh_limit(self):
        assert abs(moments.lower_bound_mean_halfplane(6.0).value - 1.0) < 1e-10

    def test_boundh_below_mean(self):
        for h in (0.6, 1.0, 1.4):
            m = moments.mean_halfplane(h)
            assert moments.lower_bound_mean_halfplane(h).value <= m.value + 1e-6
            assert moments.trivial_lower_bound_mean_halfplane(h).value <= m.value


class TestSecondMoments:
    def test_corner(self):
        m = moments.second_moment_corner()
        assert abs(m.value - 0.23781) < 2e-4
        assert m.order == 2 and m.location == SeedLocation.corner()

    def test_edge(self):
        m = moments.second_moment_edge()
        assert abs(m.value - 0.54508) < 5e-4

    def test_bulk(self):
        m = moments.second_moment_bulk()
        assert abs(m.value - 1.28018) < 1e-2

    def test_variance_positive(self, corner_moments, edge_moments, bulk_moments):
        for lm in (corner_moments, edge_moments, bulk_moments):
            assert lm.variance > 0.0


class TestFitGamma:
    def test_round_trip(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            mean = float(rng.uniform(0.1, 3.0))
            var = float(rng.uniform(0.01, 1.0))
            g = moments.fit_gamma(mean, var + mean * mean)
            assert abs(g.mean - mean) < 1e-12
            assert abs(g.variance - var) < 1e-12

    def test_rounded_table_inputs(self):
        # Feeding the 5-decimal published moments reproduces the published
        # parameters only to ~1e-4 (k amplifies input rounding ~12x).
        g = moments.fit_gamma(0.36351, 0.23781)
        assert abs(g.k - 1.25052) < 2e-4
        assert abs(g.nu - 0.29069) < 2e-4
        g = moments.fit_gamma(0.61082, 0.54508)
        assert abs(g.k - 2.16935) < 2e-4
        assert abs(g.nu - 0.28157) < 2e-4
        g = moments.fit_gamma(1.0, 1.28018)
        assert abs(g.k - 3.56918) < 2e-4
        assert abs(g.nu - 0.28018) < 2e-4

    def test_rejects_nonpositive_variance(self):
        with pytest.raises(ValueError):
            moments.fit_gamma(1.0, 1.0)
        with pytest.raises(ValueError):
            moments.fit_gamma(-1.0, 2.0)


class TestLocationMoments:
    def test_cached(self):
        a = moments.location_moments(SeedLocation.corner())
        b = moments.location_moments(SeedLocation.corner())
        assert a is b

    def test_bulk_mean_is_exact(self, bulk_moments):
        assert bulk_moments.mean.value == 1.0

    def test_rejects_offsets(self):
        with pytest.raises(ValueError):
            moments.location_moments(SeedLocation.quadrant_boundary(1.0))


class TestRescaleIntensity:
    def test_identity(self):
        m = moments.mean_corner()
        assert moments.rescale_intensity(m, 1.0) is m

    def test_bulk_mean(self):
        m = moments.MomentResult(
            location=SeedLocation.bulk(), order=1, value=1.0,
            err_estimate=0.0, method="closed_form",
        )
        assert moments.rescale_intensity(m, 4.0).value == 0.25

    def test_corner_mean(self):
        scaled = moments.rescale_intensity(moments.mean_corner(), 4.0)
        assert abs(scaled.value - moments.CORNER_MEAN / 4.0) < 1e-16
        assert scaled.location == SeedLocation.corner()

    def test_second_order_and_offset(self):
        m = moments.MomentResult(
            location=SeedLocation.quadrant_boundary(2.0), order=1, value=0.8,
            err_estimate=1e-9, method="quadrature",
        )
        scaled = moments.rescale_intensity(m, 4.0)
        assert scaled.location.offset == 1.0
        assert scaled.value == 0.2
        m2 = moments.second_moment_bulk()
        assert abs(moments.rescale_intensity(m2, 2.0).value - m2.value / 4.0) < 1e-15

    def test_rejects_bad_intensity(self):
        with pytest.raises(ValueError):
            moments.rescale_intensity(moments.mean_corner(), 0.0)


class TestMomentResultValidation:
    def test_second_moment_needs_fitted_location(self):
        with pytest.raises(ValueError):
            moments.MomentResult(
                location=SeedLocation.quadrant_boundary(1.0), order=2,
                value=0.5, err_estimate=0.0, method="quadrature",
            )

    def test_positive_value(self):
        with pytest.raises(ValueError):
            moments.MomentResult(
                location=SeedLocation.corner(), order=1, value=0.0,
                err_estimate=0.0, method="closed_form",
            )
