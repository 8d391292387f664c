"""Shared fixtures and independent geometric oracles.

The slice oracle integrates chord lengths of disk unions over y with
scipy's QUADPACK, which shares nothing with the closed-form void formulas
or the package's own quadrature; the Monte Carlo oracle is plain uniform
sampling.  Both are used to certify the void-area formulas.
"""

import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from voronoi_boundary import moments
from voronoi_boundary.void_geometry import SeedLocation


# ----------------------------------------------------------------------
# slice oracle: area via chord-length quadrature
# ----------------------------------------------------------------------

def _interval_of_disk(y, cx, cy, R):
    dy = y - cy
    if abs(dy) >= R:
        return None
    w = math.sqrt(R * R - dy * dy)
    return (cx - w, cx + w)


def _union_length(intervals, xmin=None):
    """Total length of a union of intervals, optionally clipped to x >= xmin."""
    clipped = []
    for iv in intervals:
        if iv is None:
            continue
        lo, hi = iv
        if xmin is not None:
            lo = max(lo, xmin)
        if hi > lo:
            clipped.append((lo, hi))
    if not clipped:
        return 0.0
    clipped.sort()
    total = 0.0
    cur_lo, cur_hi = clipped[0]
    for lo, hi in clipped[1:]:
        if lo > cur_hi:
            total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    return total + (cur_hi - cur_lo)


def slice_area(disks, domain):
    """Area of (union of disks) intersected with the domain.

    disks: iterable of ((cx, cy), R); domain: "quadrant", "halfplane", "plane".
    Accurate to ~1e-9 absolute.
    """
    disks = list(disks)
    y_lo = min(cy - R for (cx, cy), R in disks)
    y_hi = max(cy + R for (cx, cy), R in disks)
    if domain in ("quadrant", "halfplane"):
        y_lo = max(0.0, y_lo)
    if y_hi <= y_lo:
        return 0.0
    xmin = 0.0 if domain == "quadrant" else None

    def chord(y):
        return _union_length(
            [_interval_of_disk(y, cx, cy, R) for (cx, cy), R in disks], xmin
        )

    pts = sorted(
        p
        for (cx, cy), R in disks
        for p in (cy - R, cy, cy + R)
        if y_lo < p < y_hi
    )
    with warnings.catch_warnings():
        # Chord kinks trip QUADPACK's roundoff heuristic long after the
        # value is converged to ~1e-10.
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(
            chord, y_lo, y_hi, points=pts or None, limit=2000,
            epsabs=1e-11, epsrel=1e-11,
        )
    return val


def mc_area(disks, domain, n, seed):
    """Uniform-sampling estimate of the same area; returns (estimate, std_err)."""
    disks = list(disks)
    x_lo = min(cx - R for (cx, cy), R in disks)
    x_hi = max(cx + R for (cx, cy), R in disks)
    y_lo = min(cy - R for (cx, cy), R in disks)
    y_hi = max(cy + R for (cx, cy), R in disks)
    if domain == "quadrant":
        x_lo = max(0.0, x_lo)
        y_lo = max(0.0, y_lo)
    elif domain == "halfplane":
        y_lo = max(0.0, y_lo)
    box = (x_hi - x_lo) * (y_hi - y_lo)
    rng = np.random.default_rng(seed)
    x = rng.uniform(x_lo, x_hi, n)
    y = rng.uniform(y_lo, y_hi, n)
    inside = np.zeros(n, dtype=bool)
    for (cx, cy), R in disks:
        inside |= (x - cx) ** 2 + (y - cy) ** 2 < R * R
    q = inside.mean()
    return box * q, box * math.sqrt(q * (1.0 - q) / n)


def pair_disks(theta, w1, w2):
    """The two disks of the normalized pair void (z = 1, seed at the origin)."""
    r1 = 1.0 / math.cos(w1)
    r2 = 1.0 / math.cos(w2)
    p1 = (r1 * math.cos(theta - w1), r1 * math.sin(theta - w1))
    p2 = (r2 * math.cos(theta + w2), r2 * math.sin(theta + w2))
    return [(p1, r1), (p2, r2)]


def quadrant_void_disk(r, phi, a):
    """Disk of the single-point quadrant void (seed at (a, 0))."""
    d = math.sqrt(r * r + a * a - 2.0 * a * r * math.cos(phi))
    return [((r * math.cos(phi), r * math.sin(phi)), d)]


def halfplane_void_disk(r, phi, h):
    """Disk of the single-point half-plane void (seed at (0, h))."""
    d = math.sqrt(r * r + h * h - 2.0 * h * r * math.sin(phi))
    return [((r * math.cos(phi), r * math.sin(phi)), d)]


# ----------------------------------------------------------------------
# fixtures
# ----------------------------------------------------------------------

@pytest.fixture(scope="session")
def corner_moments():
    return moments.location_moments(SeedLocation.corner())


@pytest.fixture(scope="session")
def edge_moments():
    return moments.location_moments(SeedLocation.edge())


@pytest.fixture(scope="session")
def bulk_moments():
    return moments.location_moments(SeedLocation.bulk())
