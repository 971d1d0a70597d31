"""Closed-form impulse and step responses of the power-law and
Erdelyi-Kober memory kernels.

These are the ground-truth values the numeric operator engine is validated
against.  The accelerator step response is a known trouble spot: the source
formula and a direct differentiation of the Caputo definition disagree by a
factor of the order (Gamma(1 - alpha) = -alpha * Gamma(-alpha)).  Both
constants are surfaced; the derivation-backed one is the oracle of record
because it is the one the numeric accelerator actually converges to.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .special import gamma

__all__ = [
    "power_law_step_response",
    "power_law_impulse_response",
    "accelerator_step_response",
    "AcceleratorStepResponse",
    "ek_impulse_response",
]


def power_law_step_response(m: float, alpha: float, T: float, t: float) -> float:
    """Response of the power-law multiplier to a unit step on [0, T]:
    (m / Gamma(alpha+1)) (t^alpha - (t - T)^alpha), continuous at t = T with
    the constant-input response m t^alpha / Gamma(alpha+1)."""
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if not t >= T > 0.0:
        raise DomainError(f"require t >= T > 0, got t={t!r}, T={T!r}")
    return m / gamma(alpha + 1.0) * (t**alpha - (t - T) ** alpha)


def power_law_impulse_response(m: float, alpha: float, T: float, t: float) -> float:
    """Response of the power-law multiplier to a unit impulse at T:
    (m / Gamma(alpha)) (t - T)^(alpha-1); decays for alpha < 1, constant at
    alpha = 1."""
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if not t > T >= 0.0:
        raise DomainError(f"require t > T >= 0, got t={t!r}, T={T!r}")
    return m / gamma(alpha) * (t - T) ** (alpha - 1.0)


@dataclass(frozen=True)
class AcceleratorStepResponse:
    """Derivation-backed value plus the literal source constant.

    `value` is -a / Gamma(1-alpha) * (t-T)^(-alpha), obtained by pushing the
    step through the Caputo-form accelerator (the step's derivative is a
    negative impulse).  `paper_value` is a / Gamma(-alpha) * (t-T)^(-alpha),
    the literal constant, smaller by the factor alpha.  The numeric engine
    converges to `value`.
    """

    value: float
    paper_value: float


def accelerator_step_response(a: float, alpha: float, T: float,
                              t: float) -> AcceleratorStepResponse:
    """Accelerator response to a unit step on [0, T], for 0 < alpha < 1."""
    if not 0.0 < alpha < 1.0 or float(alpha).is_integer():
        raise DomainError(f"alpha must be non-integer in (0, 1), got {alpha!r}")
    if not t > T >= 0.0:
        raise DomainError(f"require t > T >= 0, got t={t!r}, T={T!r}")
    decay = (t - T) ** (-alpha)
    return AcceleratorStepResponse(
        value=-a / gamma(1.0 - alpha) * decay,
        paper_value=a / gamma(-alpha) * decay,
    )


def ek_impulse_response(m: float, alpha: float, eta: float, sigma: float,
                        T: float, t: float) -> float:
    """Response of the Erdelyi-Kober multiplier to a unit impulse at T:
    sigma m T^(sigma(eta+1)-1) / Gamma(alpha) * t^(-sigma(alpha+eta))
    * (t^sigma - T^sigma)^(alpha-1)."""
    if alpha <= 0.0 or sigma <= 0.0:
        raise DomainError("alpha and sigma must be positive")
    if not t > T > 0.0:
        raise DomainError(f"require t > T > 0, got t={t!r}, T={T!r}")
    return (
        sigma
        * m
        * T ** (sigma * (eta + 1.0) - 1.0)
        / gamma(alpha)
        * t ** (-sigma * (alpha + eta))
        * (t**sigma - T**sigma) ** (alpha - 1.0)
    )
