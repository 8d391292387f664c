"""Secure in-/out-degree distributions for a node near a domain boundary.

A virtual node at the seed location can receive securely from every
legitimate user that is closer to it than to any eavesdropper; those users
are exactly the ones inside the node's Voronoi cell in the eavesdropper
tessellation.  Conditioned on the cell size A (unit-intensity scale), the
in-degree is Poisson(p A) with p the legitimate-to-eavesdropper intensity
ratio.  Mixing over the Gamma fit of A gives a negative-binomial-shaped mass
function; the out-degree is geometric and location-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .moments import GammaParams, location_moments
from .quadrature import QuadSpec
from .special_functions import ConvergenceError, hyp2f1_secrecy, ln_gamma
from .void_geometry import SeedLocation

__all__ = [
    "IntensityRatio",
    "DegreeDistribution",
    "IsolationRow",
    "in_degree_pmf",
    "in_degree_cdf",
    "in_degree_moments",
    "out_degree_pmf",
    "out_degree_cdf",
    "in_isolation_probability",
    "out_isolation_probability",
    "support_truncation",
    "isolation_comparison",
]


@dataclass(frozen=True)
class IntensityRatio:
    """Densities of legitimate users and eavesdroppers; p is always derived."""

    lambda_l: float
    lambda_e: float

    def __post_init__(self) -> None:
        if self.lambda_l <= 0.0 or self.lambda_e <= 0.0:
            raise ValueError(
                f"intensities must be > 0, got ({self.lambda_l}, {self.lambda_e})"
            )

    @property
    def p(self) -> float:
        return self.lambda_l / self.lambda_e


def in_degree_pmf(n: int, p: float, g: GammaParams) -> float:
    """P(N_in = n) under the Gamma(k, nu) cell-size approximation.

    (p nu)^n Gamma(k+n) / (n! Gamma(k) (1 + p nu)^(n+k)), evaluated in
    log-space so large n and large p nu cannot overflow.
    """
    _check_n(n)
    _check_p(p)
    pnu = p * g.nu
    log_pmf = (
        n * math.log(pnu)
        + ln_gamma(g.k + n)
        - ln_gamma(n + 1.0)
        - ln_gamma(g.k)
        - (n + g.k) * math.log1p(pnu)
    ) if n > 0 else -g.k * math.log1p(pnu)
    return math.exp(log_pmf)


def in_degree_cdf(n: int, p: float, g: GammaParams) -> float:
    """P(N_in <= n) via the hypergeometric closed form.

    1 - prefac * 2F1(1, 1+k+n; 2+n; p nu / (1 + p nu)); if the series cap is
    hit the cumulative mass-function sum is used instead.  Agrees with the
    direct sum to 1e-9.
    """
    _check_n(n)
    _check_p(p)
    pnu = p * g.nu
    z = pnu / (1.0 + pnu)
    try:
        hyp = hyp2f1_secrecy(g.k, n, z)
    except ConvergenceError:
        return min(1.0, sum(in_degree_pmf(m, p, g) for m in range(n + 1)))
    log_prefac = (
        (1.0 + n) * math.log(pnu)
        - (1.0 + g.k + n) * math.log1p(pnu)
        + ln_gamma(1.0 + g.k + n)
        - ln_gamma(g.k)
        - ln_gamma(2.0 + n)
    )
    value = 1.0 - math.exp(log_prefac) * hyp
    return min(1.0, max(0.0, value))


def in_degree_moments(
    p: float, mean_area: float, second_moment_area: float
) -> tuple[float, float]:
    """Mean and variance of the in-degree from the cell-size moments.

    mean = p E{A}; var = p E{A} + p^2 (E{A^2} - E{A}^2), the total
    mean/variance of a Poisson mixed over the cell size.
    """
    _check_p(p)
    if second_moment_area <= mean_area * mean_area:
        raise ValueError("second moment must exceed the squared mean")
    mean = p * mean_area
    var = mean + p * p * (second_moment_area - mean_area * mean_area)
    return mean, var


def out_degree_pmf(n: int, p: float) -> float:
    """P(N_out = n): geometric with success ratio p / (1 + p)."""
    _check_n(n)
    _check_p(p)
    ratio = p / (1.0 + p)
    return ratio**n / (1.0 + p)


def out_degree_cdf(n: int, p: float) -> float:
    """P(N_out <= n) = 1 - (p / (1 + p))^(n + 1)."""
    _check_n(n)
    _check_p(p)
    return 1.0 - (p / (1.0 + p)) ** (n + 1)


def in_isolation_probability(p: float, g: GammaParams) -> float:
    """Probability of zero secure in-connections: (1 + p nu)^(-k)."""
    return in_degree_pmf(0, p, g)


def out_isolation_probability(p: float) -> float:
    """Probability of zero secure out-connections: 1 / (1 + p)."""
    _check_p(p)
    return 1.0 / (1.0 + p)


def support_truncation(p: float, g: GammaParams, tail_tol: float = 1e-12) -> int:
    """Smallest N with P(N_in > N) <= tail_tol, from a Chernoff bound.

    The mass function is negative-binomial with success probability
    z = p nu / (1 + p nu); tilting with exp(t) = 1/sqrt(z) gives
    P(N > m) <= z^(m/2) (1 + sqrt(z))^k.
    """
    _check_p(p)
    if not 0.0 < tail_tol < 1.0:
        raise ValueError(f"tail_tol must be in (0, 1), got {tail_tol}")
    pnu = p * g.nu
    z = pnu / (1.0 + pnu)
    root_z = math.sqrt(z)
    m = 2.0 * (g.k * math.log1p(root_z) + math.log(1.0 / tail_tol)) / math.log(1.0 / z)
    return max(1, math.ceil(m))


@dataclass(frozen=True)
class DegreeDistribution:
    """Secure-degree law of one kind; in-degree carries its Gamma fit."""

    kind: str
    intensities: IntensityRatio
    gamma: Optional[GammaParams] = None

    def __post_init__(self) -> None:
        if self.kind not in ("in_degree", "out_degree"):
            raise ValueError(f"unknown degree kind {self.kind!r}")
        if self.kind == "in_degree" and self.gamma is None:
            raise ValueError("in_degree distribution needs Gamma parameters")

    def pmf(self, n: int) -> float:
        if self.kind == "in_degree":
            return in_degree_pmf(n, self.intensities.p, self.gamma)
        return out_degree_pmf(n, self.intensities.p)

    def cdf(self, n: int) -> float:
        if self.kind == "in_degree":
            return in_degree_cdf(n, self.intensities.p, self.gamma)
        return out_degree_cdf(n, self.intensities.p)

    def support_bound(self, tail_tol: float = 1e-12) -> int:
        p = self.intensities.p
        if self.kind == "in_degree":
            return support_truncation(p, self.gamma, tail_tol)
        return max(1, math.ceil(math.log(tail_tol) / math.log(p / (1.0 + p))))


@dataclass(frozen=True)
class IsolationRow:
    lambda_e: float
    p: float
    in_isolation: float
    out_isolation: float


def isolation_comparison(
    lambda_l: float,
    lambda_e_grid: Sequence[float],
    location: SeedLocation,
    spec: Optional[QuadSpec] = None,
) -> list[IsolationRow]:
    """In- vs out-isolation probabilities over an eavesdropper-intensity grid.

    Uses the fitted Gamma parameters of the given location, so only corner,
    edge, and bulk are admissible.
    """
    if location.kind not in ("corner", "edge", "bulk"):
        raise ValueError(f"no fitted in-degree model at location {location}")
    g = location_moments(location, spec).gamma
    rows = []
    for lambda_e in lambda_e_grid:
        ratio = IntensityRatio(lambda_l, lambda_e)
        rows.append(
            IsolationRow(
                lambda_e=lambda_e,
                p=ratio.p,
                in_isolation=in_isolation_probability(ratio.p, g),
                out_isolation=out_isolation_probability(ratio.p),
            )
        )
    return rows


def _check_n(n: int) -> None:
    if n < 0 or n != int(n):
        raise ValueError(f"degree must be a nonnegative integer, got {n}")


def _check_p(p: float) -> None:
    if p <= 0.0:
        raise ValueError(f"intensity ratio must be > 0, got {p}")
