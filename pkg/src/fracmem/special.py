"""Special functions: Gamma, Beta, two-parameter Mittag-Leffler, the Vi
order-integral and truncated-Gaussian order weights.

Everything here is a pure function of its arguments and is used by all the
operator and model modules.  Evaluation is plain 64-bit floating point; the
Mittag-Leffler function switches between the defining power series (with
exactly-rounded summation) and an exponential-plus-algebraic large-argument
expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError
from .quadrature import adaptive_gauss_legendre

__all__ = [
    "MLParams",
    "TruncatedGaussian",
    "gamma",
    "rgamma",
    "beta",
    "mittag_leffler",
    "ml_asymptotic",
    "vi",
    "truncated_normal_weight",
]

# Series/asymptotics handover point for the Mittag-Leffler evaluation.
ML_Z_SWITCH = 30.0
ML_SERIES_TOL = 1e-10
ML_ASYMPTOTIC_TERMS = 5
_MAX_SERIES_TERMS = 100_000
_EXP_OVERFLOW = 709.0  # log of the largest finite float64


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function on the real line, poles excluded.

    Arguments below 1/2 go through the reflection formula
    Gamma(x) = pi / (sin(pi x) * Gamma(1 - x)), which covers the negative
    non-integer values needed by the accelerator response constants.
    """
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma is singular at {x!r}")
    if x >= 0.5:
        return math.gamma(x)
    return math.pi / (math.sin(math.pi * x) * math.gamma(1.0 - x))


def _gamma_sign(x: float) -> float:
    """Sign of Gamma(x) for non-pole x (negative on (-1,0), (-3,-2), ...)."""
    if x > 0.0:
        return 1.0
    return -1.0 if math.floor(-x) % 2 == 0 else 1.0


def rgamma(x: float) -> float:
    """Reciprocal Gamma: entire, zero at 0, -1, -2, ..."""
    if _is_nonpositive_integer(x):
        return 0.0
    if abs(x) < 170.0:
        return 1.0 / gamma(x)
    # avoid overflow of gamma itself for very large |x|
    return _gamma_sign(x) * math.exp(-math.lgamma(x))


def beta(x: float, y: float) -> float:
    """Euler Beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), x, y > 0."""
    if x <= 0.0 or y <= 0.0:
        raise DomainError(f"beta requires positive arguments, got ({x!r}, {y!r})")
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


_rgamma_vec = np.vectorize(rgamma, otypes=[float])


@dataclass(frozen=True)
class MLParams:
    """Arguments of the two-parameter Mittag-Leffler function E_{alpha,beta}(z)."""

    alpha: float
    beta: float
    z: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise DomainError(f"Mittag-Leffler order must be positive, got {self.alpha!r}")

    def evaluate(self) -> float:
        return mittag_leffler(self.alpha, self.beta, self.z)


def _ml_series(alpha: float, beta_: float, z: float, tol: float) -> float:
    """Power series sum_{k>=0} z^k / Gamma(alpha k + beta), exactly-rounded.

    Terms are generated in log space to dodge intermediate overflow, then
    combined with math.fsum.  Raises ConvergenceError when float64 cannot
    certify the requested relative tolerance (term overflow, or cancellation
    in the alternating tail for large negative z).
    """
    if z == 0.0:
        return rgamma(beta_)
    log_abs_z = math.log(abs(z))
    sign_z = 1.0 if z > 0.0 else -1.0
    terms: list[float] = []
    running = 0.0
    prev_abs = math.inf
    decreasing_small = 0
    seen_nonzero = False
    k = 0
    while k < _MAX_SERIES_TERMS:
        g = alpha * k + beta_
        if _is_nonpositive_integer(g):
            term = 0.0
            abs_term = 0.0
        else:
            log_mag = k * log_abs_z - math.lgamma(g)
            if log_mag > _EXP_OVERFLOW:
                raise ConvergenceError(
                    "Mittag-Leffler series term overflows float64 "
                    f"(alpha={alpha!r}, beta={beta_!r}, z={z!r})"
                )
            abs_term = math.exp(log_mag)
            term = abs_term * (sign_z ** (k % 2)) * _gamma_sign(g)
            seen_nonzero = True
        terms.append(term)
        running += term
        stop_tol = min(tol, 1e-16)
        if seen_nonzero and abs_term <= stop_tol * max(abs(running), 1e-290) and abs_term <= prev_abs:
            decreasing_small += 1
            if decreasing_small >= 2:
                break
        else:
            decreasing_small = 0
        prev_abs = abs_term if abs_term > 0.0 else prev_abs
        k += 1
    else:
        raise ConvergenceError(
            f"Mittag-Leffler series did not converge in {_MAX_SERIES_TERMS} terms"
        )
    total = math.fsum(terms)
    gross = math.fsum(abs(t) for t in terms)
    # 1-ulp-per-term bound on the cancellation error of the float64 terms
    if gross * 1e-16 > tol * max(abs(total), 1e-290):
        raise ConvergenceError(
            "Mittag-Leffler series cannot reach the requested tolerance in "
            f"float64: cancellation of ~{gross:.3e} down to {total:.3e}"
        )
    return total


def ml_asymptotic(
    alpha: float,
    beta: float,
    lam: float,
    t: float,
    m_terms: int,
    with_error_estimate: bool = False,
) -> float | tuple[float, float]:
    """Large-t expansion of E_{alpha, beta+1}(lam * t^alpha) for 0 < alpha < 2.

    Returns
        (lam^(-beta/alpha) / alpha) * t^(-beta) * exp(lam^(1/alpha) * t)
        - sum_{j=1..m} lam^(-j) / (Gamma(beta + 1 - alpha j) * t^(alpha j)).

    The truncation constant is not known a priori; when asked, the magnitude
    of the last retained algebraic term is returned as the error estimate.
    """
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"asymptotic expansion requires 0 < alpha < 2, got {alpha!r}")
    if lam <= 0.0:
        raise DomainError(f"asymptotic expansion requires lam > 0, got {lam!r}")
    if t <= 0.0:
        raise DomainError(f"asymptotic expansion requires t > 0, got {t!r}")
    exponent = lam ** (1.0 / alpha) * t
    if exponent > _EXP_OVERFLOW:
        raise ConvergenceError(
            f"exponential factor exp({exponent:.4g}) overflows float64"
        )
    leading = lam ** (-beta / alpha) / alpha * t ** (-beta) * math.exp(exponent)
    tail = 0.0
    last = 0.0
    for j in range(1, m_terms + 1):
        last = lam ** (-j) * rgamma(beta + 1.0 - alpha * j) * t ** (-alpha * j)
        tail += last
    value = leading - tail
    if with_error_estimate:
        return value, abs(last)
    return value


def mittag_leffler(
    alpha: float,
    beta: float = 1.0,
    z: float = 0.0,
    z_switch: float = ML_Z_SWITCH,
    series_tol: float = ML_SERIES_TOL,
    asymptotic_terms: int = ML_ASYMPTOTIC_TERMS,
) -> float:
    """Two-parameter Mittag-Leffler function E_{alpha, beta}(z), alpha > 0.

    The defining series is used for z <= z_switch; larger positive arguments
    go through the exponential-plus-algebraic expansion (valid for
    alpha < 2).  Raises ConvergenceError when neither regime can certify the
    tolerance in float64.
    """
    if not alpha > 0.0:
        raise DomainError(f"Mittag-Leffler order must be positive, got {alpha!r}")
    if z > z_switch and alpha < 2.0:
        return ml_asymptotic(alpha, beta - 1.0, 1.0, z ** (1.0 / alpha), asymptotic_terms)
    return _ml_series(alpha, beta, z, series_tol)


def vi(a1: float, a2: float, t: float) -> float:
    """Order-integral Vi(a1, a2, t) = int_{a1}^{a2} t^alpha / Gamma(alpha) dalpha."""
    if not (a2 >= a1 >= 0.0):
        raise DomainError(f"vi requires a2 >= a1 >= 0, got ({a1!r}, {a2!r})")
    if t < 0.0:
        raise DomainError(f"vi requires t >= 0, got {t!r}")
    if a1 == a2 or t == 0.0:
        return 0.0
    log_t = math.log(t)

    def integrand(alpha):
        return np.exp(alpha * log_t) * _rgamma_vec(alpha)

    return adaptive_gauss_legendre(integrand, a1, a2, tol=1e-10)


@dataclass(frozen=True)
class TruncatedGaussian:
    """Gaussian order-weight restricted to [a1, a2], renormalized to mass one."""

    mu: float
    sigma: float
    a1: float
    a2: float

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")
        if not (0.0 <= self.a1 < self.mu < self.a2):
            raise DomainError(
                f"require 0 <= a1 < mu < a2, got a1={self.a1!r}, mu={self.mu!r}, a2={self.a2!r}"
            )

    @property
    def normalization(self) -> float:
        """Gaussian mass inside [a1, a2]; lies in (0, 1]."""

        def cdf(x: float) -> float:
            return 0.5 * (1.0 + math.erf((x - self.mu) / (self.sigma * math.sqrt(2.0))))

        return cdf(self.a2) - cdf(self.a1)

    def density(self, alpha: float) -> float:
        """Unnormalized Gaussian density at alpha."""
        u = (alpha - self.mu) / self.sigma
        return math.exp(-0.5 * u * u) / (self.sigma * math.sqrt(2.0 * math.pi))


def truncated_normal_weight(g: TruncatedGaussian, alpha: float) -> float:
    """Normalized order weight rho(alpha)/N so that it integrates to one on [a1, a2]."""
    if not (g.a1 <= alpha <= g.a2):
        raise DomainError(
            f"alpha={alpha!r} outside the truncation window [{g.a1!r}, {g.a2!r}]"
        )
    return g.density(alpha) / g.normalization
