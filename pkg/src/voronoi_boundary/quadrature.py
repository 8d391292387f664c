"""Adaptive numerical integration tuned for Gaussian-decay integrands.

The workhorse is an embedded Gauss-Legendre pair (7 and 15 points) on each
panel.  The 15-point value is kept, the difference against the 7-point value
is the panel error estimate, and panels are bisected until each one meets its
width-proportional share of the global budget.  Gauss nodes are strictly
interior, so integrands are never evaluated at panel endpoints; removable
endpoint singularities (the 1/cos^2 blow-ups of the normalized voids at
omega = +-pi/2, or d = 0 at a seed position) are therefore harmless.

Everything is deterministic: panels are refined and summed left to right, so
identical inputs give bit-identical outputs.  All integrands must accept a
numpy array of abscissae and return the matching array of values.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .special_functions import erfc

__all__ = [
    "QuadSpec",
    "QuadResult",
    "Region3D",
    "ToleranceNotMetError",
    "DEFAULT_SPEC",
    "TRIPLE_SPEC",
    "integrate_1d",
    "integrate_radial_semi_infinite",
    "integrate_3d_iterated",
    "gaussian_tail_bound",
]


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and limits for one integration call.

    rel_tol:           relative target, in (0, 1e-2].
    abs_tol:           absolute floor for the target.
    max_depth:         bisection depth cap per panel, at least 10.
    truncation_margin: semi-infinite tails are cut where the analytic tail
                       bound drops below abs_tol / truncation_margin.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_depth: int = 48
    truncation_margin: float = 10.0

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol <= 1e-2):
            raise ValueError(f"rel_tol must be in (0, 1e-2], got {self.rel_tol}")
        if self.abs_tol < 0.0:
            raise ValueError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if self.max_depth < 10:
            raise ValueError(f"max_depth must be >= 10, got {self.max_depth}")
        if self.truncation_margin < 1.0:
            raise ValueError(
                f"truncation_margin must be >= 1, got {self.truncation_margin}"
            )

    def tightened(self, factor: float) -> "QuadSpec":
        """Spec with both tolerances divided by ``factor`` (used for inner loops)."""
        return QuadSpec(
            rel_tol=max(self.rel_tol / factor, 1e-15),
            abs_tol=self.abs_tol / factor,
            max_depth=self.max_depth,
            truncation_margin=self.truncation_margin,
        )


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_estimate: float
    evals: int

    def __post_init__(self) -> None:
        if self.err_estimate < 0.0:
            raise ValueError("err_estimate must be >= 0")


class ToleranceNotMetError(ArithmeticError):
    """Refinement hit max_depth with the budget still exceeded.

    Carries the best available estimate in ``result``.
    """

    def __init__(self, message: str, result: QuadResult):
        super().__init__(message)
        self.result = result


DEFAULT_SPEC = QuadSpec()

#: Looser default for triple integrals, matching 5-decimal reporting needs.
TRIPLE_SPEC = QuadSpec(rel_tol=1e-5, abs_tol=1e-9)

# Embedded pair: both rules are evaluated on one panel with a single call.
_X7, _W7 = np.polynomial.legendre.leggauss(7)
_X15, _W15 = np.polynomial.legendre.leggauss(15)
_NODES = np.concatenate([_X7, _X15])


def _panel(f, lo: float, hi: float) -> tuple[float, float]:
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    y = np.asarray(f(mid + half * _NODES), dtype=float)
    i7 = half * float(np.dot(_W7, y[:7]))
    i15 = half * float(np.dot(_W15, y[7:]))
    return i15, abs(i15 - i7)


#: Hard cap on panels per integrate_1d call; 22 evaluations each.
_MAX_PANELS = 16_384


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    spec: QuadSpec = DEFAULT_SPEC,
    *,
    breakpoints: Sequence[float] = (),
) -> QuadResult:
    """Adaptively integrate a vectorized integrand over (lo, hi).

    ``breakpoints`` are optional interior panel edges (known kinks or peak
    locations); like lo and hi themselves they are never passed to ``f``.

    Globally adaptive: the panel with the worst error estimate is bisected
    until the summed estimate meets max(abs_tol, rel_tol * |integral|).
    Raises ToleranceNotMetError when the budget cannot be met because the
    worst panel sits at ``spec.max_depth`` (or the panel cap is hit); the
    exception carries the best estimate.
    """
    if not lo < hi:
        raise ValueError(f"integration range is empty: [{lo}, {hi}]")
    edges = [lo]
    for b in sorted(breakpoints):
        if edges[-1] < b < hi:
            edges.append(b)
    edges.append(hi)

    evals = 0
    heap: list[tuple[float, int, float, float, float, int]] = []
    counter = 0
    total_v = 0.0
    total_e = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = _panel(f, a, b)
        evals += 22
        heapq.heappush(heap, (-e, counter, a, b, v, 0))
        counter += 1
        total_v += v
        total_e += e

    failed = False
    while True:
        budget = max(spec.abs_tol, spec.rel_tol * abs(total_v))
        if total_e <= budget:
            break
        neg_e, _, a, b, v, depth = heap[0]
        if depth >= spec.max_depth or counter >= _MAX_PANELS:
            failed = True
            break
        heapq.heappop(heap)
        mid = 0.5 * (a + b)
        v1, e1 = _panel(f, a, mid)
        v2, e2 = _panel(f, mid, b)
        evals += 44
        total_v += v1 + v2 - v
        total_e += e1 + e2 - (-neg_e)
        heapq.heappush(heap, (-e1, counter, a, mid, v1, depth + 1))
        counter += 1
        heapq.heappush(heap, (-e2, counter, mid, b, v2, depth + 1))
        counter += 1

    # Re-sum left to right so the result does not depend on heap order.
    panels = sorted(heap, key=lambda p: p[2])
    value = 0.0
    err = 0.0
    for neg_e, _, a, b, v, depth in panels:
        value += v
        err += -neg_e

    result = QuadResult(value=value, err_estimate=err, evals=evals)
    if failed:
        raise ToleranceNotMetError(
            f"requested tolerance not met on [{lo}, {hi}] "
            f"(value ~ {value}, err ~ {err})",
            result,
        )
    return result


def gaussian_tail_bound(R: float, decay_coeff: float, shift: float) -> float:
    """Exact bound for Int_R^inf r * exp(-c (r - s)^2) dr with R >= s."""
    c = decay_coeff
    s = shift
    u = R - s
    return np.exp(-c * u * u) / (2.0 * c) + s * 0.5 * np.sqrt(np.pi / c) * erfc(
        np.sqrt(c) * u
    )


def integrate_radial_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    decay_coeff: float,
    spec: QuadSpec = DEFAULT_SPEC,
    *,
    shift: float = 0.0,
    envelope_scale: float = 1.0,
    breakpoints: Sequence[float] = (),
) -> QuadResult:
    """Integrate f over [lo, infinity) assuming a shifted-Gaussian envelope.

    Requires |f(r)| <= envelope_scale * r * exp(-decay_coeff * (r - shift)^2)
    beyond r = shift.  The range is cut at the smallest R whose analytic tail
    bound falls below abs_tol / truncation_margin, then handed to
    ``integrate_1d``.
    """
    if decay_coeff <= 0.0:
        raise ValueError(f"decay_coeff must be > 0, got {decay_coeff}")
    if shift < 0.0:
        raise ValueError(f"shift must be >= 0, got {shift}")
    target = max(spec.abs_tol, 1e-300) / (spec.truncation_margin * envelope_scale)
    # Closed-form first guess, then grow until the bound actually clears.
    R = shift + max(1.0, np.sqrt(max(np.log(1.0 / (2.0 * decay_coeff * target)), 1.0) / decay_coeff))
    while envelope_scale * gaussian_tail_bound(R, decay_coeff, shift) > target:
        R *= 1.25
    pts = [b for b in breakpoints] + [shift, shift + 2.0 / np.sqrt(decay_coeff)]
    pts = [p for p in pts if lo < p < R]
    return integrate_1d(f, lo, R, spec, breakpoints=pts)


@dataclass(frozen=True)
class Region3D:
    """Iterated-integration region with angle-dependent inner limits.

    theta runs over [theta_lo, theta_hi]; for each theta, w1 runs over
    w1_limits(theta); for each (theta, w1), w2 runs over
    w2_limits(theta, w1).  Empty inner ranges contribute zero.
    """

    theta_lo: float
    theta_hi: float
    w1_limits: Callable[[float], tuple[float, float]]
    w2_limits: Callable[[float, float], tuple[float, float]]


def integrate_3d_iterated(
    f: Callable[[float, float, np.ndarray], np.ndarray],
    region: Region3D,
    spec: QuadSpec = TRIPLE_SPEC,
) -> QuadResult:
    """Iterated adaptive integration, innermost over w2.

    ``f(theta, w1, w2_array)`` must be vectorized in its last argument.  The
    two inner levels run at tolerances 5x and 25x tighter than ``spec`` so
    that their noise stays below the outer error estimate; the reported
    err_estimate adds the outer estimate and the range-weighted worst inner
    estimates, which is conservative.
    """
    mid_spec = spec.tightened(5.0)
    inner_spec = spec.tightened(25.0)
    evals = 0
    worst_mid_err = 0.0
    worst_inner_err = 0.0

    def outer_integrand(theta_arr: np.ndarray) -> np.ndarray:
        nonlocal evals, worst_mid_err, worst_inner_err
        out = np.empty_like(theta_arr)
        for i, theta in enumerate(theta_arr):
            w1_lo, w1_hi = region.w1_limits(float(theta))
            if not w1_lo < w1_hi:
                out[i] = 0.0
                continue

            def mid_integrand(w1_arr: np.ndarray) -> np.ndarray:
                nonlocal evals, worst_inner_err
                vals = np.empty_like(w1_arr)
                for j, w1 in enumerate(w1_arr):
                    w2_lo, w2_hi = region.w2_limits(float(theta), float(w1))
                    if not w2_lo < w2_hi:
                        vals[j] = 0.0
                        continue
                    r = integrate_1d(
                        lambda w2: f(float(theta), float(w1), w2),
                        w2_lo,
                        w2_hi,
                        inner_spec,
                    )
                    evals += r.evals
                    worst_inner_err = max(worst_inner_err, r.err_estimate)
                    vals[j] = r.value
                return vals

            r = integrate_1d(mid_integrand, w1_lo, w1_hi, mid_spec)
            worst_mid_err = max(worst_mid_err, r.err_estimate)
            out[i] = r.value
        return out

    outer = integrate_1d(outer_integrand, region.theta_lo, region.theta_hi, spec)
    theta_range = region.theta_hi - region.theta_lo
    err = outer.err_estimate + theta_range * (worst_mid_err + np.pi * worst_inner_err)
    return QuadResult(value=outer.value, err_estimate=float(err), evals=evals)
