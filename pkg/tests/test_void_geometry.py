import math

import numpy as np
import pytest

from voronoi_boundary import void_geometry as vg

from conftest import (
    halfplane_void_disk,
    mc_area,
    pair_disks,
    quadrant_void_disk,
    slice_area,
)

HALF_PI = 0.5 * math.pi


class TestThresholdAngles:
    def test_phi1_zero_offset(self):
        assert vg.phi1(2.0, 0.0) == 0.0

    @pytest.mark.parametrize("r,a", [(2.0, 1.0), (0.7, 1.0), (5.0, 3.0), (1.0, 0.1)])
    def test_phi1_solves_tangency(self, r, a):
        p1 = vg.phi1(r, a)
        d = vg.seed_distance_quadrant(r, p1, a)
        assert abs(d - r * math.cos(p1)) < 1e-12

    def test_phi1_needs_large_radius(self):
        with pytest.raises(vg.RegionError):
            vg.phi1(0.99, 2.0)
        # r = a/2 is the degenerate admissible boundary: phi1 = phi2 = 0.
        assert vg.phi1(1.0, 2.0) == 0.0
        assert vg.phi2(1.0, 2.0) == 0.0

    def test_phi2_trivials(self):
        assert vg.phi2(3.0, 0.0) == HALF_PI
        assert vg.phi2(0.5, 1.0) == 0.0
        assert abs(vg.phi2(1.0, 1.0) - math.pi / 3.0) < 1e-15

    def test_phi2_needs_large_radius(self):
        with pytest.raises(vg.RegionError):
            vg.phi2(0.4, 1.0)

    def test_phi0_solves_tangency(self):
        p0 = vg.phi0(1.3, 0.8)
        d = vg.seed_distance_halfplane(1.3, p0, 0.8)
        assert abs(d - 1.3 * math.sin(p0)) < 1e-12
        assert vg.phi0(1.0, 0.0) == HALF_PI


class TestQuadrantVoid:
    def test_corner_seed_reduces_to_closed_integrand(self):
        # With the seed at the corner the void is r^2 (pi/2 + sin 2 phi).
        for r in (0.3, 1.0, 2.5):
            for phi in (0.1, 0.7, 1.3):
                v = vg.void_area_quadrant(vg.PolarPoint(r, phi), 0.0)
                assert abs(v - r * r * (HALF_PI + math.sin(2.0 * phi))) < 1e-13

    def test_mc_sampling_oracle(self):
        P = vg.PolarPoint(1.0, math.pi / 4.0)
        v = vg.void_area_quadrant(P, 1.0)
        est, se = mc_area(quadrant_void_disk(1.0, math.pi / 4.0, 1.0), "quadrant",
                          10_000_000, seed=1)
        assert abs(v - est) < max(4.0 * se, 1e-3 * v)

    def test_subset_of_disk(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            r = float(rng.uniform(0.05, 4.0))
            phi = float(rng.uniform(0.0, HALF_PI))
            a = float(rng.uniform(0.0, 3.0))
            P = vg.PolarPoint(r, phi)
            d = float(vg.seed_distance_quadrant(r, phi, a))
            if d == 0.0:
                continue
            v = vg.void_area_quadrant(P, a)
            assert 0.0 < v <= math.pi * d * d + 1e-12

    @pytest.mark.parametrize("r,a", [(2.0, 1.0), (1.0, 1.0), (3.0, 2.0), (0.8, 1.2)])
    def test_case_continuity(self, r, a):
        p1 = vg.phi1(r, a)
        p2 = vg.phi2(r, a)
        assert abs(
            vg.quadrant_void_v1(r, p1, a) - vg.quadrant_void_v2(r, p1, a)
        ) < 1e-10
        assert abs(
            vg.quadrant_void_v2(r, p2, a) - vg.quadrant_void_v3(r, p2, a)
        ) < 1e-10

    def test_case_classifier(self):
        a = 1.0
        assert vg.void_case_quadrant(vg.PolarPoint(0.3, 0.5), a) is vg.VoidCase.Q3SMALL
        r = 2.0
        p1 = vg.phi1(r, a)
        p2 = vg.phi2(r, a)
        assert vg.void_case_quadrant(vg.PolarPoint(r, 0.5 * p1), a) is vg.VoidCase.Q1
        assert vg.void_case_quadrant(vg.PolarPoint(r, 0.5 * (p1 + p2)), a) is vg.VoidCase.Q2
        assert vg.void_case_quadrant(vg.PolarPoint(r, p2 + 0.01), a) is vg.VoidCase.Q3

    def test_degenerate_point(self):
        with pytest.raises(vg.DegeneratePointError):
            vg.void_area_quadrant(vg.PolarPoint(1.0, 0.0), 1.0)

    def test_slice_oracle_random_configs(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            r = float(rng.uniform(0.05, 4.0))
            phi = float(rng.uniform(0.0, HALF_PI))
            a = float(rng.uniform(0.0, 3.0))
            d = float(vg.seed_distance_quadrant(r, phi, a))
            if d < 1e-6:
                continue
            v = vg.void_area_quadrant(vg.PolarPoint(r, phi), a)
            oracle = slice_area(quadrant_void_disk(r, phi, a), "quadrant")
            assert abs(v - oracle) < 1e-6 * max(1.0, oracle)

    def test_mc_three_sigma_screen(self):
        # Statistical cross-check on top of the deterministic slice oracle;
        # at 3 sigma a correct implementation still trips ~0.3% of cases.
        rng = np.random.default_rng(23)
        outside = 0
        for i in range(100):
            r = float(rng.uniform(0.1, 3.0))
            phi = float(rng.uniform(0.0, HALF_PI))
            a = float(rng.uniform(0.0, 2.0))
            if float(vg.seed_distance_quadrant(r, phi, a)) < 1e-3:
                continue
            v = vg.void_area_quadrant(vg.PolarPoint(r, phi), a)
            est, se = mc_area(quadrant_void_disk(r, phi, a), "quadrant", 100_000, seed=i)
            z = abs(v - est) / se
            assert z < 5.0
            outside += z > 3.0
        assert outside <= 5


class TestHalfplaneVoid:
    def test_edge_seed_reduces_to_closed_integrand(self):
        for r in (0.4, 1.0, 3.0):
            for phi in (0.2, 0.9, 1.4):
                v = vg.void_area_halfplane(vg.PolarPoint(r, phi), 0.0)
                expected = r * r * (HALF_PI + phi + math.sin(phi) * math.cos(phi))
                assert abs(v - expected) < 1e-13

    def test_mc_sampling_oracle(self):
        v = vg.void_area_halfplane(vg.PolarPoint(0.5, math.pi / 3.0), 1.0)
        est, se = mc_area(halfplane_void_disk(0.5, math.pi / 3.0, 1.0), "halfplane",
                          10_000_000, seed=2)
        assert abs(v - est) < max(4.0 * se, 1e-3 * v)

    def test_interior_disk_untruncated(self):
        r, h = 3.0, 1.0
        P = vg.PolarPoint(r, HALF_PI)
        d = r - h
        assert vg.void_case_halfplane(P, h) is vg.VoidCase.H2
        assert abs(vg.void_area_halfplane(P, h) - math.pi * d * d) < 1e-12

    def test_case_classifier(self):
        h = 1.0
        assert vg.void_case_halfplane(vg.PolarPoint(0.3, 1.0), h) is vg.VoidCase.HSMALL
        r = 2.0
        p0 = vg.phi0(r, h)
        assert vg.void_case_halfplane(vg.PolarPoint(r, 0.5 * p0), h) is vg.VoidCase.H1
        assert vg.void_case_halfplane(vg.PolarPoint(r, p0 + 0.05), h) is vg.VoidCase.H2
        # mirrored side
        assert vg.void_case_halfplane(vg.PolarPoint(r, math.pi - 0.5 * p0), h) is vg.VoidCase.H1

    def test_slice_oracle_random_configs(self):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            r = float(rng.uniform(0.05, 4.0))
            phi = float(rng.uniform(0.0, math.pi))
            h = float(rng.uniform(0.0, 3.0))
            d = float(vg.seed_distance_halfplane(r, phi, h))
            if d < 1e-6:
                continue
            v = vg.void_area_halfplane(vg.PolarPoint(r, phi), h)
            oracle = slice_area(halfplane_void_disk(r, phi, h), "halfplane")
            assert abs(v - oracle) < 1e-6 * max(1.0, oracle)

    def test_degenerate_point(self):
        with pytest.raises(vg.DegeneratePointError):
            vg.void_area_halfplane(vg.PolarPoint(1.0, HALF_PI), 1.0)


class TestJacobian:
    def test_pin(self):
        assert abs(vg.jacobian_factor(0.0, math.pi / 4.0) - 2.0) < 1e-14

    def test_symmetry(self):
        assert vg.jacobian_factor(0.2, 0.5) == vg.jacobian_factor(0.5, 0.2)

    def test_sixth_power_pin(self):
        w = math.pi / 6.0
        expected = math.sin(math.pi / 3.0) / math.cos(w) ** 6
        assert abs(vg.jacobian_factor(w, w) - expected) < 1e-14

    def test_domain(self):
        with pytest.raises(ValueError):
            vg.jacobian_factor(HALF_PI, 0.1)
        with pytest.raises(ValueError):
            vg.jacobian_factor(-0.2, 0.1)


class TestNormalizedVoidCorner:
    def test_algebraic_pin(self):
        v = vg.normalized_void_corner(math.pi / 4.0, 0.0, 0.0)
        assert abs(v - (HALF_PI + 1.0)) < 1e-14

    def test_reduces_to_two_half_disks(self):
        # theta = pi/4, w = 0: each disk contributes pi/2 + sin(pi/2)/... the
        # bulk formula at w1 = w2 = 0 gives pi.
        assert abs(vg.normalized_void_bulk(0.3, 0.2) - vg.bulk_pair_void(0.3, 0.2)) == 0.0
        assert abs(vg.bulk_pair_void(0.0, 0.0) - math.pi) < 1e-15

    @pytest.mark.parametrize(
        "theta,w1,w2",
        [(0.6, 0.2, 0.4), (1.0, 0.3, 0.2), (0.3, -0.2, 0.5), (1.2, 0.9, 0.25)],
    )
    def test_region1_slice_oracle(self, theta, w1, w2):
        assert theta - HALF_PI <= w1 <= theta and -w1 <= w2 <= HALF_PI - theta
        v = vg.normalized_void_corner(theta, w1, w2)
        oracle = slice_area(pair_disks(theta, w1, w2), "quadrant")
        assert abs(v - oracle) < 1e-6 * oracle

    @pytest.mark.parametrize(
        "theta,w1,w2", [(-0.4, -0.6, 0.8), (-1.0, -1.2, 1.4), (-0.1, -0.3, 0.35)]
    )
    def test_region2_slice_oracle(self, theta, w1, w2):
        assert w1 <= theta < 0.0 and w2 >= -w1
        v = vg.normalized_void_corner(theta, w1, w2)
        oracle = slice_area(pair_disks(theta, w1, w2), "quadrant")
        assert abs(v - oracle) < 1e-6 * oracle

    def test_region2_mc_oracle(self):
        theta, w1, w2 = -0.4, -0.6, 0.8
        v = vg.normalized_void_corner(theta, w1, w2)
        est, se = mc_area(pair_disks(theta, w1, w2), "quadrant", 4_000_000, seed=3)
        assert abs(v - est) < max(4.0 * se, 1e-3 * v)

    def test_region_error(self):
        with pytest.raises(vg.RegionError):
            vg.normalized_void_corner(2.0, 0.1, 0.1)  # theta beyond pi/2
        with pytest.raises(vg.RegionError):
            vg.normalized_void_corner(0.5, 0.1, -0.2)  # w2 < -w1


class TestNormalizedVoidEdge:
    def test_v4_pin(self):
        # theta -> 0-, w2 = 0 gives pi/2.
        assert abs(vg.edge_pair_void_v4(0.0, 0.0) - HALF_PI) < 1e-15

    def test_v1_v2_interface_continuity(self):
        for theta in (0.2, 0.7, 1.3):
            for w1 in (theta - 1.2, theta - 0.3, theta):
                if w1 <= theta - HALF_PI or abs(w1) >= HALF_PI:
                    continue
                w2 = HALF_PI - theta
                if w2 < -w1 or abs(w2) >= HALF_PI:
                    continue
                a = vg.edge_pair_void_v1(theta, w1, w2)
                b = vg.edge_pair_void_v2(theta, w1, w2)
                assert abs(a - b) < 1e-10

    @pytest.mark.parametrize(
        "theta,w1,w2,region",
        [
            (0.6, 0.2, 0.4, "v1"),
            (0.6, 0.2, 1.1, "v2"),
            (0.6, -1.2, 1.3, "v3"),
            (-0.5, -0.8, 1.0, "v4"),
        ],
    )
    def test_slice_oracle(self, theta, w1, w2, region):
        v = vg.normalized_void_edge(theta, w1, w2)
        oracle = slice_area(pair_disks(theta, w1, w2), "halfplane")
        assert abs(v - oracle) < 1e-6 * oracle

    def test_region_error(self):
        with pytest.raises(vg.RegionError):
            vg.normalized_void_edge(0.5, 0.6, 0.1)  # w1 > theta
        with pytest.raises(vg.RegionError):
            vg.normalized_void_edge(-0.2, 0.1, 0.3)  # theta < 0 needs w1 <= theta


class TestNormalizedVoidBulk:
    def test_pin(self):
        assert abs(vg.normalized_void_bulk(0.0, 1e-9) - math.pi) < 1e-8

    def test_symmetry(self):
        assert vg.normalized_void_bulk(0.1, 0.6) == vg.normalized_void_bulk(0.6, 0.1)

    @pytest.mark.parametrize("w1,w2", [(0.3, 0.2), (-0.4, 0.9), (1.1, 0.05)])
    def test_slice_oracle(self, w1, w2):
        v = vg.normalized_void_bulk(w1, w2)
        oracle = slice_area(pair_disks(0.7, w1, w2), "plane")
        assert abs(v - oracle) < 1e-6 * oracle

    def test_domain(self):
        with pytest.raises(ValueError):
            vg.normalized_void_bulk(0.3, -0.4)
        with pytest.raises(ValueError):
            vg.normalized_void_bulk(HALF_PI, 0.1)


class TestSeedLocation:
    def test_normalization(self):
        assert vg.SeedLocation.quadrant_boundary(0.0) == vg.SeedLocation.corner()
        assert vg.SeedLocation.halfplane_offset(0.0) == vg.SeedLocation.edge()

    def test_offsets(self):
        loc = vg.SeedLocation.quadrant_boundary(2.5)
        assert loc.kind == "quadrant_boundary" and loc.offset == 2.5

    def test_validation(self):
        with pytest.raises(ValueError):
            vg.SeedLocation("nowhere")
        with pytest.raises(ValueError):
            vg.SeedLocation("corner", 1.0)
        with pytest.raises(ValueError):
            vg.SeedLocation.quadrant_boundary(-1.0)

    def test_polar_point_validation(self):
        with pytest.raises(ValueError):
            vg.PolarPoint(-1.0, 0.0)
