"""Cell-size moments, bounds, and Gamma fits for boundary-located seeds.

Means come from integrating the empty-void probability exp(-V(P)) over the
domain; second moments from the pair-transformed triple integrals of the
normalized two-point voids.  The closed-form corner mean and the four bound
expressions are evaluated directly through the special-function kernels.

All quantities are for a unit-intensity process; ``rescale_intensity`` maps
results to any intensity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import void_geometry as vg
from .quadrature import (
    DEFAULT_SPEC,
    TRIPLE_SPEC,
    QuadSpec,
    QuadResult,
    Region3D,
    integrate_1d,
    integrate_3d_iterated,
    integrate_radial_semi_infinite,
)
from .special_functions import erf, erfc, expint_upper, struve_m1

__all__ = [
    "MomentResult",
    "GammaParams",
    "LocationMoments",
    "MEAN_SPEC",
    "TABLE_SPEC",
    "EDGE_CROSSOVER",
    "CORNER_MEAN",
    "mean_corner",
    "mean_edge",
    "mean_quadrant",
    "mean_halfplane",
    "upper_bound_mean_quadrant",
    "lower_bound_mean_quadrant",
    "lower_bound_mean_halfplane",
    "trivial_lower_bound_mean_halfplane",
    "second_moment_corner",
    "second_moment_edge",
    "second_moment_bulk",
    "fit_gamma",
    "location_moments",
    "rescale_intensity",
]

HALF_PI = 0.5 * math.pi

#: Exact mean cell size with the seed at the quadrant corner.
CORNER_MEAN = math.acos(2.0 / math.pi) / math.sqrt(math.pi**2 - 4.0)

#: Default spec for the 1-D/2-D mean integrals.
MEAN_SPEC = QuadSpec(rel_tol=1e-8, abs_tol=1e-12)

#: Tight spec used for table-quality second moments (the Gamma shape k
#: amplifies second-moment errors by roughly k/variance ~ 12x).
TABLE_SPEC = QuadSpec(rel_tol=1e-6, abs_tol=1e-10)

#: Beyond this boundary offset the quadrant mean is numerically identical to
#: the half-plane edge value (the corner contribution is below 1e-12), so the
#: 1-D edge integral is returned directly.
EDGE_CROSSOVER = 8.0


@dataclass(frozen=True)
class MomentResult:
    """A cell-size moment with its provenance.

    method is one of "closed_form", "quadrature", "bound_upper",
    "bound_lower".  Second moments exist only at corner/edge/bulk.
    """

    location: vg.SeedLocation
    order: int
    value: float
    err_estimate: float
    method: str

    def __post_init__(self) -> None:
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        if not self.value > 0.0:
            raise ValueError(f"moment value must be > 0, got {self.value}")
        if self.order == 2 and self.location.kind not in ("corner", "edge", "bulk"):
            raise ValueError("second moments are only defined at corner/edge/bulk")
        if self.method not in ("closed_form", "quadrature", "bound_upper", "bound_lower"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class GammaParams:
    """Shape k and scale nu of the two-moment Gamma fit."""

    k: float
    nu: float

    def __post_init__(self) -> None:
        if not (self.k > 0.0 and self.nu > 0.0):
            raise ValueError(f"Gamma parameters must be positive, got {self}")

    @property
    def mean(self) -> float:
        return self.k * self.nu

    @property
    def variance(self) -> float:
        return self.k * self.nu * self.nu


def mean_corner() -> MomentResult:
    """Mean cell size with the seed exactly at the quadrant corner.

    Closed form arccos(2/pi) / sqrt(pi^2 - 4) ~ 0.36351.
    """
    return MomentResult(
        location=vg.SeedLocation.corner(),
        order=1,
        value=CORNER_MEAN,
        err_estimate=4.0 * np.finfo(float).eps,
        method="closed_form",
    )


def mean_edge(spec: QuadSpec = MEAN_SPEC) -> MomentResult:
    """Mean cell size with the seed on the half-plane boundary (~ 0.61082)."""
    r = integrate_1d(
        lambda p: 2.0 / (np.pi + 2.0 * p + np.sin(2.0 * p)), 0.0, HALF_PI, spec
    )
    return MomentResult(
        location=vg.SeedLocation.edge(),
        order=1,
        value=r.value,
        err_estimate=r.err_estimate,
        method="quadrature",
    )


def mean_quadrant(a: float, spec: QuadSpec = MEAN_SPEC) -> MomentResult:
    """Mean cell size with the seed on a quadrant edge, offset ``a`` from the
    corner.

    Sums the four case-split integrals of the empty-void probability: the
    disk r < a/2 around the corner (void case Q3small) plus the radial tail
    r > a/2 whose inner angular integral is split at the case thresholds
    phi1(r) and phi2(r).  Beyond ``EDGE_CROSSOVER`` the corner is invisible
    at working precision and the 1-D edge integral is returned.
    """
    if a < 0.0:
        raise ValueError(f"a must be >= 0, got {a}")
    location = vg.SeedLocation.quadrant_boundary(a)
    if a > EDGE_CROSSOVER:
        edge = mean_edge(spec)
        return MomentResult(
            location=location,
            order=1,
            value=edge.value,
            err_estimate=edge.err_estimate + 1e-12,
            method="quadrature",
        )

    inner_spec = spec.tightened(20.0)
    inner_err = _MaxTracker()

    def angular_integral(r: float) -> float:
        if r < a / 2.0:
            g = lambda p: np.exp(-vg.quadrant_void_v3(r, p, a))
            breaks = ()
        else:
            p1 = vg.phi1(r, a)
            p2 = vg.phi2(r, a)

            def g(p):
                v = np.where(
                    p < p1,
                    vg.quadrant_void_v1(r, p, a),
                    np.where(
                        p < p2,
                        vg.quadrant_void_v2(r, p, a),
                        vg.quadrant_void_v3(r, p, a),
                    ),
                )
                return np.exp(-v)

            breaks = (p1, p2)
        res = integrate_1d(g, 0.0, HALF_PI, inner_spec, breakpoints=breaks)
        inner_err.update(r * res.err_estimate)
        return res.value

    def radial_integrand(r_arr: np.ndarray) -> np.ndarray:
        return np.array([r * angular_integral(float(r)) for r in r_arr])

    value = 0.0
    err = 0.0
    if a > 0.0:
        small = integrate_1d(radial_integrand, 0.0, a / 2.0, spec)
        value += small.value
        err += small.err_estimate
    # Void area is at least the quarter disk of radius d >= |r - a|.
    tail = integrate_radial_semi_infinite(
        radial_integrand,
        a / 2.0,
        np.pi / 4.0,
        spec,
        shift=a,
        envelope_scale=HALF_PI,
    )
    value += tail.value
    err += tail.err_estimate + inner_err.value * (a + 10.0)
    return MomentResult(
        location=location, order=1, value=value, err_estimate=err, method="quadrature"
    )


def mean_halfplane(h: float, spec: QuadSpec = MEAN_SPEC) -> MomentResult:
    """Mean cell size with the seed at distance ``h`` from the half-plane
    boundary.

    Three terms, doubled for the mirror angles: the disk r < h/2 around the
    boundary foot point (all boundary-truncated voids) and the radial tail
    with the angular integral split at the tangency angle phi0(r).  Tends to
    one as h grows.
    """
    if h < 0.0:
        raise ValueError(f"h must be >= 0, got {h}")
    location = vg.SeedLocation.halfplane_offset(h)
    inner_spec = spec.tightened(20.0)
    inner_err = _MaxTracker()

    def angular_integral(r: float) -> float:
        if r < h / 2.0:
            g = lambda p: np.exp(-vg.halfplane_void_v1(r, p, h))
            breaks = ()
        else:
            p0 = vg.phi0(r, h)

            def g(p):
                d = vg.seed_distance_halfplane(r, p, h)
                v = np.where(
                    p < p0,
                    vg.halfplane_void_v1(r, p, h),
                    np.pi * d * d,
                )
                return np.exp(-v)

            breaks = (p0,)
        res = integrate_1d(g, 0.0, HALF_PI, inner_spec, breakpoints=breaks)
        inner_err.update(r * res.err_estimate)
        return res.value

    def radial_integrand(r_arr: np.ndarray) -> np.ndarray:
        return np.array([2.0 * r * angular_integral(float(r)) for r in r_arr])

    # Void area is at least the half disk of radius d >= |r - h|.
    res = integrate_radial_semi_infinite(
        radial_integrand,
        0.0,
        np.pi / 2.0,
        spec,
        shift=h,
        envelope_scale=np.pi,
    )
    err = res.err_estimate + inner_err.value * (h + 10.0)
    return MomentResult(
        location=location, order=1, value=res.value, err_estimate=err, method="quadrature"
    )


class _MaxTracker:
    __slots__ = ("value",)

    def __init__(self) -> None:
        self.value = 0.0

    def update(self, x: float) -> None:
        if x > self.value:
            self.value = x


def upper_bound_mean_quadrant(a: float) -> MomentResult:
    """Closed-form upper bound for the quadrant-edge mean; always below one.

    exp(-a^2 pi/4) - erfc(a sqrt(pi)/2) - (pi/4) M1(2 a^2) + corner mean.
    Tight at a = 0 (it reduces to the corner mean there) and tends to
    1/2 + corner mean ~ 0.86351 as a grows.
    """
    if a < 0.0:
        raise ValueError(f"a must be >= 0, got {a}")
    value = (
        math.exp(-a * a * math.pi / 4.0)
        - erfc(a * math.sqrt(math.pi) / 2.0)
        - (math.pi / 4.0) * struve_m1(2.0 * a * a)
        + CORNER_MEAN
    )
    return MomentResult(
        location=vg.SeedLocation.quadrant_boundary(a),
        order=1,
        value=value,
        err_estimate=1e-13,
        method="bound_upper",
    )


def lower_bound_mean_quadrant(a: float) -> MomentResult:
    """Loose lower bound (1/4)(1 + erf(a sqrt(pi))) from untruncated voids."""
    if a < 0.0:
        raise ValueError(f"a must be >= 0, got {a}")
    return MomentResult(
        location=vg.SeedLocation.quadrant_boundary(a),
        order=1,
        value=0.25 * (1.0 + erf(a * math.sqrt(math.pi))),
        err_estimate=4.0 * np.finfo(float).eps,
        method="bound_lower",
    )


def trivial_lower_bound_mean_halfplane(h: float) -> MomentResult:
    """Lower bound (1/2)(1 + erf(h sqrt(pi))); increases to one, never above."""
    if h < 0.0:
        raise ValueError(f"h must be >= 0, got {h}")
    return MomentResult(
        location=vg.SeedLocation.halfplane_offset(h),
        order=1,
        value=0.5 * (1.0 + erf(h * math.sqrt(math.pi))),
        err_estimate=4.0 * np.finfo(float).eps,
        method="bound_lower",
    )


def lower_bound_mean_halfplane(h: float) -> MomentResult:
    """Exponential-integral lower bound for the half-plane mean.

    1 - exp(-pi h^2)/2 + (E(10 pi h^2 / 3) - E(5 pi h^2 / 6) + E(pi h^2 / 2)
    - E(2 pi h^2)) / 2 with E the upper exponential integral.  Exceeds one
    for h around one.  The bracketed differences cancel in the h -> 0 limit,
    where the expression degenerates to the trivial bound value 1/2; that
    branch is taken explicitly so E is never evaluated at zero.
    """
    if h < 0.0:
        raise ValueError(f"h must be >= 0, got {h}")
    if h == 0.0:
        return MomentResult(
            location=vg.SeedLocation.edge(),
            order=1,
            value=0.5,
            err_estimate=0.0,
            method="bound_lower",
        )
    x = math.pi * h * h
    value = (
        1.0
        - 0.5 * math.exp(-x)
        + 0.5
        * (
            expint_upper(10.0 * x / 3.0)
            - expint_upper(5.0 * x / 6.0)
            + expint_upper(x / 2.0)
            - expint_upper(2.0 * x)
        )
    )
    return MomentResult(
        location=vg.SeedLocation.halfplane_offset(h),
        order=1,
        value=value,
        err_estimate=1e-14,
        method="bound_lower",
    )


# ----------------------------------------------------------------------
# second moments
# ----------------------------------------------------------------------

def second_moment_corner(spec: QuadSpec = TRIPLE_SPEC) -> MomentResult:
    """Second moment of the cell size with the seed at the corner (~ 0.23781).

    Two triple integrals of f(w1, w2) / V^2 over the pair-transform regions;
    the separator-below-the-boundary region enters twice by symmetry.  The
    1/2 from the radial z-integration and the factor two from ordered pairs
    cancel, leaving the displayed integrands.
    """
    region1 = Region3D(
        0.0,
        HALF_PI,
        lambda th: (th - HALF_PI, th),
        lambda th, w1: (-w1, HALF_PI - th),
    )
    r1 = integrate_3d_iterated(
        lambda th, w1, w2: vg.pair_jacobian_angular(w1, w2)
        / vg.corner_pair_void_v1(th, w1, w2) ** 2,
        region1,
        spec,
    )
    region2 = Region3D(
        -HALF_PI,
        0.0,
        lambda th: (-HALF_PI, th),
        lambda th, w1: (-w1, HALF_PI),
    )
    r2 = integrate_3d_iterated(
        lambda th, w1, w2: vg.pair_jacobian_angular(w1, w2)
        / vg.corner_pair_void_v2(th, w2) ** 2,
        region2,
        spec,
    )
    return MomentResult(
        location=vg.SeedLocation.corner(),
        order=2,
        value=r1.value + 2.0 * r2.value,
        err_estimate=r1.err_estimate + 2.0 * r2.err_estimate,
        method="quadrature",
    )


def second_moment_edge(spec: QuadSpec = TRIPLE_SPEC) -> MomentResult:
    """Second moment with the seed on the half-plane edge (~ 0.54508).

    Four triple integrals of 2 f(w1, w2) / V^2; the factor two is what is
    left of the fourfold symmetry doubling after the pair double-count and
    the z-integration half cancel.
    """
    jac = vg.pair_jacobian_angular
    terms = [
        (
            Region3D(0.0, HALF_PI, lambda th: (th - HALF_PI, th),
                     lambda th, w1: (-w1, HALF_PI - th)),
            lambda th, w1, w2: 2.0 * jac(w1, w2) / vg.edge_pair_void_v1(th, w1, w2) ** 2,
        ),
        (
            Region3D(0.0, HALF_PI, lambda th: (th - HALF_PI, th),
                     lambda th, w1: (HALF_PI - th, HALF_PI)),
            lambda th, w1, w2: 2.0 * jac(w1, w2) / vg.edge_pair_void_v2(th, w1, w2) ** 2,
        ),
        (
            Region3D(0.0, HALF_PI, lambda th: (-HALF_PI, th - HALF_PI),
                     lambda th, w1: (-w1, HALF_PI)),
            lambda th, w1, w2: 2.0 * jac(w1, w2) / vg.edge_pair_void_v3(th, w1, w2) ** 2,
        ),
        (
            Region3D(-HALF_PI, 0.0, lambda th: (-HALF_PI, th),
                     lambda th, w1: (-w1, HALF_PI)),
            lambda th, w1, w2: 2.0 * jac(w1, w2) / vg.edge_pair_void_v4(th, w2) ** 2,
        ),
    ]
    value = 0.0
    err = 0.0
    for region, integrand in terms:
        r = integrate_3d_iterated(integrand, region, spec)
        value += r.value
        err += r.err_estimate
    return MomentResult(
        location=vg.SeedLocation.edge(),
        order=2,
        value=value,
        err_estimate=err,
        method="quadrature",
    )


def second_moment_bulk(spec: QuadSpec = TRIPLE_SPEC) -> MomentResult:
    """Second moment of the typical bulk cell (~ 1.28018, variance 0.28018).

    The normalized void no longer depends on the separator direction, so the
    theta integral contributes a plain 2 pi; the integrand per ordered pair
    is f / (2 V^2) and the unordered-pair doubling multiplies the result by
    two.
    """
    region = Region3D(
        0.0,
        2.0 * math.pi,
        lambda th: (-HALF_PI, HALF_PI),
        lambda th, w1: (-w1, HALF_PI),
    )
    r = integrate_3d_iterated(
        lambda th, w1, w2: vg.pair_jacobian_angular(w1, w2)
        / (2.0 * vg.bulk_pair_void(w1, w2) ** 2),
        region,
        spec,
    )
    return MomentResult(
        location=vg.SeedLocation.bulk(),
        order=2,
        value=2.0 * r.value,
        err_estimate=2.0 * r.err_estimate,
        method="quadrature",
    )


def fit_gamma(mean: float, second_moment: float) -> GammaParams:
    """Two-moment Gamma fit: k = mean^2/var, nu = mean/k.

    Requires a positive variance, i.e. second_moment > mean^2.
    """
    if mean <= 0.0:
        raise ValueError(f"mean must be > 0, got {mean}")
    variance = second_moment - mean * mean
    if variance <= 0.0:
        raise ValueError(
            f"second moment {second_moment} implies non-positive variance"
        )
    k = mean * mean / variance
    return GammaParams(k=k, nu=mean / k)


@dataclass(frozen=True)
class LocationMoments:
    """Mean, second moment, and fitted Gamma parameters at one location."""

    location: vg.SeedLocation
    mean: MomentResult
    second_moment: MomentResult
    gamma: GammaParams

    @property
    def variance(self) -> float:
        return self.second_moment.value - self.mean.value**2


_location_moments_cache: dict[tuple, LocationMoments] = {}


def location_moments(
    location: vg.SeedLocation, spec: Optional[QuadSpec] = None
) -> LocationMoments:
    """End-to-end moments and Gamma fit at corner, edge, or bulk (cached).

    There are no fitted parameters at other seed locations.
    """
    spec = spec if spec is not None else TABLE_SPEC
    key = (location.kind, spec.rel_tol, spec.abs_tol, spec.max_depth)
    cached = _location_moments_cache.get(key)
    if cached is not None:
        return cached
    if location.kind == "corner":
        mean = mean_corner()
        second = second_moment_corner(spec)
    elif location.kind == "edge":
        mean = mean_edge(spec.tightened(1.0))
        second = second_moment_edge(spec)
    elif location.kind == "bulk":
        mean = MomentResult(
            location=vg.SeedLocation.bulk(),
            order=1,
            value=1.0,
            err_estimate=0.0,
            method="closed_form",
        )
        second = second_moment_bulk(spec)
    else:
        raise ValueError(
            f"no fitted cell-size distribution at location {location}"
        )
    result = LocationMoments(
        location=location,
        mean=mean,
        second_moment=second,
        gamma=fit_gamma(mean.value, second.value),
    )
    _location_moments_cache[key] = result
    return result


def rescale_intensity(m: MomentResult, intensity: float) -> MomentResult:
    """Map a unit-intensity moment to a process of the given intensity.

    Areas scale as 1/intensity (so order-2 moments as 1/intensity^2) and the
    boundary offsets a, h as 1/sqrt(intensity): the returned result describes
    the geometrically similar configuration of the rescaled process.
    """
    if intensity <= 0.0:
        raise ValueError(f"intensity must be > 0, got {intensity}")
    if intensity == 1.0:
        return m
    root = math.sqrt(intensity)
    if m.location.kind == "quadrant_boundary":
        location = vg.SeedLocation.quadrant_boundary(m.location.offset / root)
    elif m.location.kind == "halfplane_offset":
        location = vg.SeedLocation.halfplane_offset(m.location.offset / root)
    else:
        location = m.location
    scale = intensity if m.order == 1 else intensity * intensity
    return MomentResult(
        location=location,
        order=m.order,
        value=m.value / scale,
        err_estimate=m.err_estimate / scale,
        method=m.method,
    )
