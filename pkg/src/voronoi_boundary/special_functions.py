"""Scalar special functions used by the boundary-cell moment formulas.

Everything here is pure and deterministic, so the functions are safe to
call from any number of threads.  The garden-variety functions (erf, erfc,
log-gamma, the modified Bessel function I1, the exponential integral E1)
delegate to ``math``/``scipy.special``.  Two evaluations are implemented
locally because naive formulas lose all precision in the regime we need:

* ``struve_m1``: M1(x) = L1(x) - I1(x).  Both terms grow like e^x, so the
  subtraction cancels catastrophically for large x.  Above a crossover the
  difference is evaluated through its integral representation

      M1(x) = -(2 x / pi) * Int_0^{pi/2} exp(-x cos t) sin^2 t dt,

  which stays O(1) for all x and tends to -2/pi as x -> infinity.

* ``hyp2f1_secrecy``: the Gauss hypergeometric 2F1(1, 1+k+n; 2+n; z) for
  z in [0, 1).  The raw series converges like z^j, which is hopeless as
  z -> 1; above a switch point the value is recovered from the tail sum of
  the matching negative-binomial mass function instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

__all__ = [
    "FuncEvalPolicy",
    "DEFAULT_POLICY",
    "ConvergenceError",
    "erf",
    "erfc",
    "ln_gamma",
    "bessel_i1",
    "struve_l1",
    "struve_m1",
    "expint_upper",
    "hyp2f1_secrecy",
    "M1_CROSSOVER",
    "Z_SWITCH",
]

TWO_OVER_PI = 2.0 / math.pi

#: Below this argument M1 is computed as the series difference L1 - I1,
#: above it through the integral representation.  At the crossover both
#: routes agree to ~1e-12 while the subtraction still has ~13 good digits.
M1_CROSSOVER = 8.0

#: Above this z the 2F1 series is abandoned for the mass-function tail sum.
Z_SWITCH = 0.9


@dataclass(frozen=True)
class FuncEvalPolicy:
    """Termination policy for the locally implemented series/quadratures.

    rel_tol:   relative tolerance for series truncation, in (0, 1e-3].
    max_terms: hard cap on the number of series terms, at least 50.
    """

    rel_tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol <= 1e-3):
            raise ValueError(f"rel_tol must be in (0, 1e-3], got {self.rel_tol}")
        if self.max_terms < 50:
            raise ValueError(f"max_terms must be >= 50, got {self.max_terms}")


DEFAULT_POLICY = FuncEvalPolicy()


class ConvergenceError(RuntimeError):
    """A series hit its term cap before meeting the requested tolerance."""

    def __init__(self, message: str, *, best: float, terms: int):
        super().__init__(message)
        self.best = best
        self.terms = terms


def erf(x: float) -> float:
    """Error function (2/sqrt(pi)) * Int_0^x exp(-t^2) dt."""
    return math.erf(x)


def erfc(x: float) -> float:
    """Complementary error function 1 - erf(x), cancellation-free for large x."""
    return math.erfc(x)


def ln_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0."""
    if x <= 0.0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def bessel_i1(x: float) -> float:
    """Modified Bessel function of the first kind, order 1, for x >= 0."""
    if x < 0.0:
        raise ValueError(f"bessel_i1 requires x >= 0, got {x}")
    return float(_sp.i1(x))


def struve_l1(x: float) -> float:
    """Modified Struve function L1(x) for x >= 0."""
    if x < 0.0:
        raise ValueError(f"struve_l1 requires x >= 0, got {x}")
    return float(_sp.modstruve(1, x))


def expint_upper(x: float) -> float:
    """Exponential integral Int_x^infinity exp(-t)/t dt for x > 0.

    This is the integral conventionally called E1.  It diverges
    logarithmically as x -> 0+, hence the strict domain check.
    """
    if x <= 0.0:
        raise ValueError(f"expint_upper requires x > 0, got {x}")
    return float(_sp.exp1(x))


def struve_m1(x: float, policy: FuncEvalPolicy = DEFAULT_POLICY) -> float:
    """M1(x) = L1(x) - I1(x) for x >= 0, accurate for every magnitude of x.

    The value decreases from 0 at x = 0 toward -2/pi as x -> infinity, the
    residual gap shrinking like 2/(pi x^2).
    """
    if x < 0.0:
        raise ValueError(f"struve_m1 requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if x < M1_CROSSOVER:
        return struve_l1(x) - bessel_i1(x)
    return _m1_via_integral(x, policy)


# 32-point Gauss-Legendre rule on [-1, 1]; nodes are strictly interior.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _m1_via_integral(x: float, policy: FuncEvalPolicy = DEFAULT_POLICY) -> float:
    """Evaluate M1 through its integral representation.

    With u = cos t the representation becomes

        M1(x) = -(2 x / pi) * Int_0^1 exp(-x u) sqrt(1 - u^2) du.

    The integrand decays on the scale 1/x, so the quadrature interval is cut
    at u = 60/x (beyond which the contribution is < e^-60 of the total) and
    covered by a panel-doubling composite Gauss rule until two successive
    refinements agree to policy.rel_tol.
    """
    upper = min(1.0, 60.0 / x)

    def composite(n_panels: int) -> float:
        edges = np.linspace(0.0, upper, n_panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        u = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        vals = np.exp(-x * u) * np.sqrt(np.maximum(0.0, 1.0 - u * u))
        return float(np.sum(half * (vals @ _GL_WEIGHTS)))

    prev = composite(2)
    n = 4
    while True:
        curr = composite(n)
        if abs(curr - prev) <= policy.rel_tol * abs(curr):
            return -TWO_OVER_PI * x * curr
        if n * 32 > policy.max_terms * 8:
            raise ConvergenceError(
                f"struve_m1 integral did not stabilize at x={x}",
                best=-TWO_OVER_PI * x * curr,
                terms=n * 32,
            )
        prev = curr
        n *= 2


def hyp2f1_secrecy(
    k: float, n: int, z: float, policy: FuncEvalPolicy = DEFAULT_POLICY
) -> float:
    """Gauss hypergeometric 2F1(1, 1+k+n; 2+n; z) for k > 0, n >= 0, z in [0, 1).

    This is exactly the function appearing in the secure in-degree CDF with
    z = p*nu / (1 + p*nu).  For z above ``Z_SWITCH`` the slowly converging
    series is replaced by the equivalent tail sum of the negative-binomial
    mass function with shape k and success probability z, divided by the
    CDF prefactor; both routes agree to the requested tolerance where they
    overlap.

    Raises ConvergenceError if ``policy.max_terms`` terms do not reach
    ``policy.rel_tol``.
    """
    if k <= 0.0:
        raise ValueError(f"hyp2f1_secrecy requires k > 0, got {k}")
    if n < 0 or n != int(n):
        raise ValueError(f"hyp2f1_secrecy requires integer n >= 0, got {n}")
    if not (0.0 <= z < 1.0):
        raise ValueError(f"hyp2f1_secrecy requires z in [0, 1), got {z}")
    n = int(n)
    if z == 0.0:
        return 1.0
    if z <= Z_SWITCH:
        return _hyp2f1_series(k, n, z, policy)
    return _hyp2f1_via_tail(k, n, z, policy)


def _hyp2f1_series(k: float, n: int, z: float, policy: FuncEvalPolicy) -> float:
    """Direct series: since (1)_j / j! = 1, the terms obey a 2-term recurrence."""
    b = 1.0 + k + n
    c = 2.0 + n
    term = 1.0
    total = 1.0
    for j in range(policy.max_terms):
        term *= z * (b + j) / (c + j)
        total += term
        # Future term ratios are z*(b+i)/(c+i); they approach z monotonically,
        # so the larger of the next ratio and z bounds the whole tail.
        ratio = max(z, z * (b + j + 1.0) / (c + j + 1.0))
        if ratio < 1.0 and term * ratio / (1.0 - ratio) <= policy.rel_tol * abs(total):
            return total
    raise ConvergenceError(
        f"2F1 series did not converge (k={k}, n={n}, z={z})",
        best=total,
        terms=policy.max_terms,
    )


def _hyp2f1_via_tail(k: float, n: int, z: float, policy: FuncEvalPolicy) -> float:
    """Recover 2F1 from the negative-binomial tail it represents.

    With w(m) = C(k+m-1, m) z^m (1-z)^k, the identity is

        sum_{m > n} w(m) = prefac * 2F1(1, 1+k+n; 2+n; z),
        prefac = z^(1+n) (1-z)^k Gamma(1+k+n) / (Gamma(k) Gamma(2+n)).

    The tail terms are summed directly; their ratios approach z from either
    side, giving a geometric bound on the remainder.
    """
    log_1mz = math.log1p(-z)
    log_z = math.log(z)
    log_prefac = (
        (1.0 + n) * log_z
        + k * log_1mz
        + ln_gamma(1.0 + k + n)
        - ln_gamma(k)
        - ln_gamma(2.0 + n)
    )
    m0 = n + 1
    log_w = (
        ln_gamma(k + m0)
        - ln_gamma(m0 + 1.0)
        - ln_gamma(k)
        + m0 * log_z
        + k * log_1mz
    )
    term = math.exp(log_w)
    total = term
    m = m0
    for _ in range(policy.max_terms):
        term *= z * (k + m) / (m + 1.0)
        m += 1
        total += term
        ratio = max(z, z * (k + m) / (m + 1.0))
        if ratio < 1.0 and term * ratio / (1.0 - ratio) <= policy.rel_tol * total:
            return total / math.exp(log_prefac)
    raise ConvergenceError(
        f"2F1 tail sum did not converge (k={k}, n={n}, z={z})",
        best=total / math.exp(log_prefac),
        terms=policy.max_terms,
    )
