"""Closed-form void areas for Voronoi cells near quadrant/half-plane boundaries.

A point P belongs to the cell of the seed S0 exactly when its *void* (the
disk around P through S0, intersected with the domain) contains no other
seed.  This module evaluates those void areas exactly for every case split:

* seed on the quadrant boundary at distance ``a`` from the corner, with the
  point P at polar coordinates (r, phi) measured from the corner;
* seed at distance ``h`` from the edge of a half-plane, with P at polar
  coordinates measured from the foot point of the seed on the boundary;
* normalized two-point voids (z = 1 slice) used by the second-moment triple
  integrals, for the seed at the corner, at the half-plane edge, and in the
  bulk, together with the Jacobian of the (z, theta, w1, w2) transformation.

Formula kernels accept numpy arrays and are free of domain checks; the
public dispatchers validate, classify the case, and return a scalar.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PolarPoint",
    "SeedLocation",
    "VoidCase",
    "DegeneratePointError",
    "RegionError",
    "phi1",
    "phi2",
    "phi0",
    "seed_distance_quadrant",
    "seed_distance_halfplane",
    "quadrant_void_v1",
    "quadrant_void_v2",
    "quadrant_void_v3",
    "halfplane_void_v1",
    "void_case_quadrant",
    "void_case_halfplane",
    "void_area_quadrant",
    "void_area_halfplane",
    "jacobian_factor",
    "corner_pair_void_v1",
    "corner_pair_void_v2",
    "edge_pair_void_v1",
    "edge_pair_void_v2",
    "edge_pair_void_v3",
    "edge_pair_void_v4",
    "bulk_pair_void",
    "normalized_void_corner",
    "normalized_void_edge",
    "normalized_void_bulk",
]

HALF_PI = 0.5 * math.pi


class DegeneratePointError(ValueError):
    """The evaluation point coincides with the seed (d = 0)."""


class RegionError(ValueError):
    """An angle triple lies in none of the admissible integration regions."""


@dataclass(frozen=True)
class PolarPoint:
    """Polar coordinates (r, phi) on the unit-intensity length scale."""

    r: float
    phi: float

    def __post_init__(self) -> None:
        if not (self.r >= 0.0 and math.isfinite(self.r)):
            raise ValueError(f"r must be finite and >= 0, got {self.r}")
        if not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi}")


@dataclass(frozen=True)
class SeedLocation:
    """Where the conditioned seed sits relative to the domain boundary.

    ``quadrant_boundary(a)`` places it on one quadrant edge at distance
    ``a`` from the corner; ``halfplane_offset(h)`` at distance ``h`` from
    the boundary of a half-plane.  The zero-offset cases normalize to the
    dedicated ``corner`` and ``edge`` kinds.
    """

    kind: str
    offset: float = 0.0

    _KINDS = ("corner", "edge", "bulk", "quadrant_boundary", "halfplane_offset")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown seed location kind {self.kind!r}")
        if self.offset < 0.0 or not math.isfinite(self.offset):
            raise ValueError(f"offset must be finite and >= 0, got {self.offset}")
        if self.kind in ("corner", "edge", "bulk") and self.offset != 0.0:
            raise ValueError(f"{self.kind} location carries no offset")

    @classmethod
    def corner(cls) -> "SeedLocation":
        return cls("corner")

    @classmethod
    def edge(cls) -> "SeedLocation":
        return cls("edge")

    @classmethod
    def bulk(cls) -> "SeedLocation":
        return cls("bulk")

    @classmethod
    def quadrant_boundary(cls, a: float) -> "SeedLocation":
        if a == 0.0:
            return cls("corner")
        return cls("quadrant_boundary", float(a))

    @classmethod
    def halfplane_offset(cls, h: float) -> "SeedLocation":
        if h == 0.0:
            return cls("edge")
        return cls("halfplane_offset", float(h))

    def __str__(self) -> str:
        if self.kind in ("corner", "edge", "bulk"):
            return self.kind
        return f"{self.kind}({self.offset:g})"


class VoidCase(enum.Enum):
    """Case labels for the single-point void dispatch."""

    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q3SMALL = "Q3small"
    H1 = "H1"
    H2 = "H2"
    HSMALL = "Hsmall"


# ----------------------------------------------------------------------
# threshold angles
# ----------------------------------------------------------------------

def phi1(r: float, a: float) -> float:
    """Angle below which only the boundary through the seed cuts the void.

    Solves d(r, phi, a) = r cos(phi): at phi1 the disk around P through the
    seed is tangent to the far quadrant edge.  Requires r >= a/2 (otherwise
    the void contains the corner and the case does not apply); collapses to
    0 when a = 0.
    """
    if a == 0.0:
        return 0.0
    if r < a / 2.0:
        raise RegionError(f"phi1 needs r >= a/2 (r={r}, a={a})")
    return math.acos(_clip1((-a + math.sqrt(2.0 * a * a + r * r)) / r))


def phi2(r: float, a: float) -> float:
    """Angle at which the disk around P through the seed passes the corner.

    Solves d(r, phi, a) = r; equals arccos(a / 2r).  Requires r >= a/2.
    """
    if r < a / 2.0 or r == 0.0:
        raise RegionError(f"phi2 needs r >= a/2 > 0 (r={r}, a={a})")
    return math.acos(_clip1(a / (2.0 * r)))


def phi0(r: float, h: float) -> float:
    """Half-plane analogue of phi1: tangency angle of the void and boundary.

    Solves d(r, phi, h) = r sin(phi); equals arcsin((-h + sqrt(2h^2 + r^2))/r)
    for r >= h/2, and collapses to pi/2 when h = 0.
    """
    if h == 0.0:
        return HALF_PI
    if r < h / 2.0:
        raise RegionError(f"phi0 needs r >= h/2 (r={r}, h={h})")
    return math.asin(_clip1((-h + math.sqrt(2.0 * h * h + r * r)) / r))


def _clip1(x: float) -> float:
    return min(1.0, max(-1.0, x))


# ----------------------------------------------------------------------
# vectorized formula kernels (no validation; scalars or numpy arrays)
# ----------------------------------------------------------------------

def seed_distance_quadrant(r, phi, a):
    """Distance from P = (r, phi) to the seed at (a, 0)."""
    return np.sqrt(r * r + a * a - 2.0 * a * r * np.cos(phi))


def seed_distance_halfplane(r, phi, h):
    """Distance from P = (r, phi) to the seed at (h, pi/2)."""
    return np.sqrt(r * r + h * h - 2.0 * h * r * np.sin(phi))


def quadrant_void_v1(r, phi, a):
    """Void cut by the boundary through the seed only (case Q1)."""
    d = seed_distance_quadrant(r, phi, a)
    d2 = d * d
    w = np.arccos(np.clip(r * np.sin(phi) / d, -1.0, 1.0))
    return np.pi * d2 - w * d2 + r * np.sin(phi) * np.abs(r * np.cos(phi) - a)


def quadrant_void_v2(r, phi, a):
    """Void cut by both quadrant edges, corner outside the disk (case Q2)."""
    d = seed_distance_quadrant(r, phi, a)
    d2 = d * d
    w1 = np.arccos(np.clip(r * np.sin(phi) / d, -1.0, 1.0))
    w2 = np.arccos(np.clip(r * np.cos(phi) / d, -1.0, 1.0))
    return (
        np.pi * d2
        - (w1 + w2) * d2
        + r * np.sin(phi) * np.abs(r * np.cos(phi) - a)
        + r * d * np.cos(phi) * np.sin(w2)
    )


def quadrant_void_v3(r, phi, a):
    """Void containing the corner: trapezium + triangle + circular sector (Q3)."""
    d = seed_distance_quadrant(r, phi, a)
    d2 = d * d
    w3 = np.arccos(np.clip(r * np.cos(phi) / d, -1.0, 1.0))
    w4 = np.arccos(np.clip(r * np.sin(phi) / d, -1.0, 1.0))
    return (
        0.5 * r * np.sin(phi) * (r * np.cos(phi) + a)
        + 0.5 * r * d * np.cos(phi) * np.sin(w3)
        + 0.5 * (1.5 * np.pi - w3 - w4) * d2
    )


def halfplane_void_v1(r, phi, h):
    """Disk around P through the seed, truncated by the half-plane boundary."""
    d = seed_distance_halfplane(r, phi, h)
    w = np.arccos(np.clip(r * np.sin(phi) / d, -1.0, 1.0))
    return (np.pi - w + 0.5 * np.sin(2.0 * w)) * d * d


# ----------------------------------------------------------------------
# single-point void dispatchers
# ----------------------------------------------------------------------

def void_case_quadrant(P: PolarPoint, a: float) -> VoidCase:
    """Classify the quadrant void case for P; intervals are [lower, upper)
    with the final case closed."""
    _check_quadrant_args(P, a)
    if P.r < a / 2.0:
        return VoidCase.Q3SMALL
    if a > 0.0 and P.phi < phi1(P.r, a):
        return VoidCase.Q1
    if P.r > 0.0 and P.phi < phi2(P.r, a):
        return VoidCase.Q2
    return VoidCase.Q3


def void_area_quadrant(P: PolarPoint, a: float) -> float:
    """Area of the void of P in the quadrant with the seed at (a, 0).

    Positive and at most pi*d^2.  Raises DegeneratePointError when P is the
    seed itself.
    """
    case = void_case_quadrant(P, a)
    if case is VoidCase.Q1:
        return float(quadrant_void_v1(P.r, P.phi, a))
    if case is VoidCase.Q2:
        return float(quadrant_void_v2(P.r, P.phi, a))
    return float(quadrant_void_v3(P.r, P.phi, a))


def _check_quadrant_args(P: PolarPoint, a: float) -> None:
    if a < 0.0:
        raise ValueError(f"a must be >= 0, got {a}")
    if not 0.0 <= P.phi <= HALF_PI:
        raise ValueError(f"quadrant point needs phi in [0, pi/2], got {P.phi}")
    if seed_distance_quadrant(P.r, P.phi, a) == 0.0:
        raise DegeneratePointError("P coincides with the seed (d = 0)")


def void_case_halfplane(P: PolarPoint, h: float) -> VoidCase:
    """Classify the half-plane void case for P (phi in [0, pi])."""
    _check_halfplane_args(P, h)
    if P.r < h / 2.0:
        return VoidCase.HSMALL
    # d > r sin(phi) iff phi is on the boundary side of the tangency angle
    # phi0 (mirrored for phi > pi/2); the tangency itself belongs to H2.
    d = seed_distance_halfplane(P.r, P.phi, h)
    if d > P.r * math.sin(P.phi):
        return VoidCase.H1
    return VoidCase.H2


def void_area_halfplane(P: PolarPoint, h: float) -> float:
    """Area of the void of P in the half-plane with the seed at (h, pi/2)."""
    case = void_case_halfplane(P, h)
    if case is VoidCase.H2:
        d = seed_distance_halfplane(P.r, P.phi, h)
        return float(np.pi * d * d)
    return float(halfplane_void_v1(P.r, P.phi, h))


def _check_halfplane_args(P: PolarPoint, h: float) -> None:
    if h < 0.0:
        raise ValueError(f"h must be >= 0, got {h}")
    if not 0.0 <= P.phi <= math.pi:
        raise ValueError(f"half-plane point needs phi in [0, pi], got {P.phi}")
    if seed_distance_halfplane(P.r, P.phi, h) == 0.0:
        raise DegeneratePointError("P coincides with the seed (d = 0)")


# ----------------------------------------------------------------------
# two-point (second moment) machinery
# ----------------------------------------------------------------------

def jacobian_factor(w1: float, w2: float) -> float:
    """Angular factor sin(w1 + w2) / (cos^3 w1 cos^3 w2) of the pair transform.

    The full Jacobian determinant is z^3 times this factor.  Defined for
    w1, w2 in (-pi/2, pi/2) with w1 + w2 > 0 (the points must not be
    collinear with the seed); symmetric and strictly positive.
    """
    if abs(w1) >= HALF_PI or abs(w2) >= HALF_PI:
        raise ValueError("jacobian_factor needs |w1|, |w2| < pi/2")
    if w1 + w2 <= 0.0:
        raise ValueError("jacobian_factor needs w1 + w2 > 0")
    return math.sin(w1 + w2) / (math.cos(w1) ** 3 * math.cos(w2) ** 3)


def pair_jacobian_angular(w1, w2):
    """Vectorized jacobian_factor without domain checks."""
    return np.sin(w1 + w2) / (np.cos(w1) ** 3 * np.cos(w2) ** 3)


def _wedge_term(theta, w):
    """Void share of a point at phi = theta - w whose disk is cut by the
    boundary through the seed and by the separating line through the seed."""
    return (2.0 * theta + np.sin(2.0 * (theta - w)) + np.sin(2.0 * w)) / (
        2.0 * np.cos(w) ** 2
    )


def _free_term(w):
    """Void share of a point whose disk meets no boundary (bulk form)."""
    return (np.pi + 2.0 * w + np.sin(2.0 * w)) / (2.0 * np.cos(w) ** 2)


def corner_pair_void_v1(theta, w1, w2):
    """Normalized two-point void, corner seed, separator direction in the
    quadrant (both disks truncated by one quadrant edge each)."""
    return _wedge_term(theta, w1) + (
        np.pi - 2.0 * theta + np.sin(2.0 * (theta + w2)) + np.sin(2.0 * w2)
    ) / (2.0 * np.cos(w2) ** 2)


def corner_pair_void_v2(theta, w2):
    """Normalized two-point void, corner seed, separator direction below the
    boundary: the void of the second point alone determines the area."""
    return (np.pi + 2.0 * np.sin(2.0 * (theta + w2))) / (2.0 * np.cos(w2) ** 2)


def edge_pair_void_v1(theta, w1, w2):
    """Edge seed, both points on the right of the seed normal."""
    return _wedge_term(theta, w1) + _free_term(w2)


def _edge_left_term(theta, w2):
    """Void share of a point at phi = theta + w2 in the left half (phi > pi/2),
    truncated by the half-plane boundary."""
    return (
        2.0 * np.pi - 2.0 * theta + np.sin(2.0 * w2) - np.sin(2.0 * (theta + w2))
    ) / (2.0 * np.cos(w2) ** 2)


def edge_pair_void_v2(theta, w1, w2):
    """Edge seed, first point right, second point left of the seed normal."""
    return _wedge_term(theta, w1) + _edge_left_term(theta, w2)


def edge_pair_void_v3(theta, w1, w2):
    """Edge seed, both points left of the seed normal."""
    return _free_term(w1) + _edge_left_term(theta, w2)


def edge_pair_void_v4(theta, w2):
    """Edge seed, separator direction below the boundary: void of the second
    point alone."""
    return (
        np.pi + 2.0 * theta + 2.0 * w2 + np.sin(2.0 * (theta + w2))
    ) / (2.0 * np.cos(w2) ** 2)


def bulk_pair_void(w1, w2):
    """Normalized two-point void in the infinite plane."""
    return _free_term(w1) + _free_term(w2)


def normalized_void_corner(theta: float, w1: float, w2: float) -> float:
    """Dispatch the corner-seed normalized pair void over its two regions.

    Region 1 (theta in [0, pi/2]): w1 in [theta - pi/2, theta], w2 in
    [-w1, pi/2 - theta].  Region 2 (theta in [-pi/2, 0)): w1 in (-pi/2,
    theta], w2 in [-w1, pi/2).  The mirror region theta in [pi/2, pi] is
    covered by symmetry doubling and is not dispatched here.
    """
    _check_pair_angles(w1, w2)
    if 0.0 <= theta <= HALF_PI:
        if theta - HALF_PI <= w1 <= theta and -w1 <= w2 <= HALF_PI - theta:
            return float(corner_pair_void_v1(theta, w1, w2))
        raise RegionError(f"({theta}, {w1}, {w2}) outside the corner regions")
    if -HALF_PI <= theta < 0.0:
        if w1 <= theta and -w1 <= w2:
            return float(corner_pair_void_v2(theta, w2))
    raise RegionError(f"({theta}, {w1}, {w2}) outside the corner regions")


def normalized_void_edge(theta: float, w1: float, w2: float) -> float:
    """Dispatch the edge-seed normalized pair void over its four regions."""
    _check_pair_angles(w1, w2)
    if -HALF_PI <= theta < 0.0:
        if w1 <= theta and -w1 <= w2:
            return float(edge_pair_void_v4(theta, w2))
        raise RegionError(f"({theta}, {w1}, {w2}) outside the edge regions")
    if not 0.0 <= theta <= HALF_PI:
        raise RegionError(f"({theta}, {w1}, {w2}) outside the edge regions")
    if w2 < -w1:
        raise RegionError(f"({theta}, {w1}, {w2}) outside the edge regions")
    if w1 < theta - HALF_PI:
        return float(edge_pair_void_v3(theta, w1, w2))
    if w1 > theta:
        raise RegionError(f"({theta}, {w1}, {w2}) outside the edge regions")
    if w2 < HALF_PI - theta:
        return float(edge_pair_void_v1(theta, w1, w2))
    return float(edge_pair_void_v2(theta, w1, w2))


def normalized_void_bulk(w1: float, w2: float) -> float:
    """Normalized pair void in the bulk; needs |wi| < pi/2 and w1 + w2 > 0."""
    _check_pair_angles(w1, w2)
    if w1 + w2 <= 0.0:
        raise ValueError("normalized_void_bulk needs w1 + w2 > 0")
    return float(bulk_pair_void(w1, w2))


def _check_pair_angles(w1: float, w2: float) -> None:
    if abs(w1) >= HALF_PI or abs(w2) >= HALF_PI:
        raise ValueError("pair void angles need |w1|, |w2| < pi/2")
