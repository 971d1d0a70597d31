"""Harrod-Domar growth dynamics with power-law memory.

The national-income balance Y = B D^alpha Y + C(t) is solved three ways:

- in closed form through Mittag-Leffler functions (the oracle of record),
- numerically with an Adams-Bashforth-Moulton predictor-corrector for the
  equivalent Caputo equation D^alpha Y = (Y - C(t)) / B,
- asymptotically for large t, which exposes the effective technological
  growth rate B^(-1/alpha) replacing the classical 1/B.

The asymptotics keep the exponential-plus-algebraic structure of the
Mittag-Leffler expansion; the algebraic corrections enter with a minus sign
(the literal source drops it) and the consumption-part exponential carries
B^((mu-1)/alpha), both pinned by the mu = 1 and alpha = 1 reductions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .signals import Grid, Trajectory
from .special import gamma, mittag_leffler, rgamma

__all__ = [
    "Zero",
    "Constant",
    "PowerConsumption",
    "Proportional",
    "HarrodDomarSpec",
    "RateReport",
    "solve_closed",
    "solve_power_consumption",
    "evaluate_solution",
    "solve_numeric",
    "residual_max",
    "effective_growth_rate",
    "classify_principles",
    "asymptotic_solution",
]


@dataclass(frozen=True)
class Zero:
    """No non-productive consumption (closed model)."""


@dataclass(frozen=True)
class Constant:
    """C(t) = C."""

    C: float


@dataclass(frozen=True)
class PowerConsumption:
    """C(t) = C t^(mu-1), mu > 0."""

    C: float
    mu: float

    def __post_init__(self):
        if self.mu <= 0.0:
            raise DomainError(f"mu must be positive, got {self.mu!r}")


@dataclass(frozen=True)
class Proportional:
    """C(t) = c Y(t): absorbed by rescaling B to B / (1 - c)."""

    c: float

    def __post_init__(self):
        if not 0.0 <= self.c < 1.0:
            raise DomainError(f"propensity must lie in [0, 1), got {self.c!r}")


Consumption = Zero | Constant | PowerConsumption | Proportional


@dataclass(frozen=True)
class HarrodDomarSpec:
    """Model input: capital intensity B, fading order alpha, initial
    derivatives Y^(k)(0) for k = 0..n-1, and the consumption policy."""

    B: float
    alpha: float
    y0: tuple[float, ...]
    consumption: Consumption = Zero()

    def __post_init__(self):
        if self.B <= 0.0:
            raise DomainError(f"capital intensity must be positive, got {self.B!r}")
        if self.alpha <= 0.0:
            raise DomainError(f"fading order must be positive, got {self.alpha!r}")
        if len(self.y0) != self.n:
            raise DomainError(
                f"need {self.n} initial derivatives for order {self.alpha!r}, "
                f"got {len(self.y0)}"
            )

    @property
    def n(self) -> int:
        return int(math.ceil(self.alpha))

    def rescaled_for_proportional(self) -> "HarrodDomarSpec":
        """(1-c) Y = B D^alpha Y is the closed model with B' = B / (1-c)."""
        if not isinstance(self.consumption, Proportional):
            raise DomainError("only proportional consumption can be rescaled")
        return HarrodDomarSpec(
            B=self.B / (1.0 - self.consumption.c),
            alpha=self.alpha,
            y0=self.y0,
            consumption=Zero(),
        )


def _homogeneous(spec: HarrodDomarSpec, t: float) -> float:
    z = t**spec.alpha / spec.B
    total = 0.0
    for k, y0k in enumerate(spec.y0):
        total += y0k * t**k * mittag_leffler(spec.alpha, k + 1.0, z)
    return total


def solve_closed(spec: HarrodDomarSpec, t: float) -> float:
    """Closed-model solution Y(t) = sum_k Y^(k)(0) t^k E_{alpha,k+1}(t^alpha / B).

    Proportional consumption goes through the exact B / (1-c) rescale.
    """
    if isinstance(spec.consumption, Proportional):
        return solve_closed(spec.rescaled_for_proportional(), t)
    if not isinstance(spec.consumption, Zero):
        raise DomainError("solve_closed covers the closed model; "
                          "use solve_power_consumption for C(t) != 0")
    if t < 0.0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    return _homogeneous(spec, t)


def _consumption_part(spec: HarrodDomarSpec, C: float, mu: float, t: float,
                      form: str) -> float:
    z = t**spec.alpha / spec.B
    if form == "rearranged":
        return C * t ** (mu - 1.0) * (
            1.0 - gamma(mu) * mittag_leffler(spec.alpha, mu, z)
        )
    if form == "convolution":
        return -C / spec.B * gamma(mu) * t ** (spec.alpha + mu - 1.0) * \
            mittag_leffler(spec.alpha, spec.alpha + mu, z)
    raise DomainError(f"unknown form {form!r}")


def solve_power_consumption(spec: HarrodDomarSpec, t: float,
                            form: str = "rearranged") -> float:
    """Solution with C(t) = C t^(mu-1).

    `form` selects between the two equivalent closed expressions for the
    consumption response (a rearranged Mittag-Leffler identity links them);
    both are kept as a mutual cross-check.
    """
    cons = spec.consumption
    if isinstance(cons, Constant):
        C, mu = cons.C, 1.0
    elif isinstance(cons, PowerConsumption):
        C, mu = cons.C, cons.mu
    elif isinstance(cons, Zero):
        C, mu = 0.0, 1.0
    else:
        raise DomainError("proportional consumption has no power-law form; "
                          "use solve_closed on the rescaled model")
    if t < 0.0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    if t == 0.0:
        if C != 0.0 and mu < 1.0 and spec.alpha + mu <= 1.0:
            raise DomainError("solution is unbounded at t = 0 for this mu")
        return spec.y0[0]
    part = 0.0 if C == 0.0 else _consumption_part(spec, C, mu, t, form)
    return part + _homogeneous(spec, t)


def evaluate_solution(spec: HarrodDomarSpec, t: float) -> float:
    """Closed-form solution for whichever consumption policy the spec carries."""
    if isinstance(spec.consumption, (Zero, Proportional)):
        return solve_closed(spec, t)
    return solve_power_consumption(spec, t)


# ---------------------------------------------------------------------------
# numeric solver


def _consumption_on_grid(spec: HarrodDomarSpec, points: np.ndarray) -> np.ndarray:
    cons = spec.consumption
    if isinstance(cons, Zero):
        return np.zeros_like(points)
    if isinstance(cons, Constant):
        return np.full_like(points, cons.C)
    if isinstance(cons, PowerConsumption):
        if cons.mu < 1.0:
            raise DomainError(
                "power consumption with mu < 1 is unbounded at t = 0 and "
                "cannot be sampled for the numeric solver"
            )
        return cons.C * points ** (cons.mu - 1.0)
    raise DomainError("proportional consumption should be rescaled away first")


def solve_numeric(spec: HarrodDomarSpec, grid: Grid) -> Trajectory:
    """Adams-Bashforth-Moulton trajectory of D^alpha Y = (Y - C(t)) / B on a
    uniform grid, 0 < alpha <= 2.

    The known leading singular behavior f(0, Y(0)) t^alpha / Gamma(alpha+1) is
    split off and its fractional integral (all power functions) is applied in
    closed form, so the product-trapezoid corrector only ever discretizes the
    smooth remainder.  The right-hand side is linear in Y, so the corrector
    fixed point is solved exactly instead of a single predictor-corrector
    sweep.
    """
    if isinstance(spec.consumption, Proportional):
        out = solve_numeric(spec.rescaled_for_proportional(), grid)
        out.metadata["consumption"] = "proportional(rescaled)"
        return out
    if not 0.0 < spec.alpha <= 2.0:
        raise DomainError(f"numeric solver covers 0 < alpha <= 2, got {spec.alpha!r}")
    if not grid.is_uniform or grid.t0 != 0.0:
        raise DomainError("numeric solver requires a uniform grid starting at 0")
    alpha = spec.alpha
    B = spec.B
    h = grid.h
    n = grid.n
    points = grid.points
    c_grid = _consumption_on_grid(spec, points)

    c_corr = h**alpha / gamma(alpha + 2.0)
    if c_corr / B >= 1.0:
        raise DomainError(
            f"step h={h!r} too large for B={B!r}, alpha={alpha!r}: "
            "the corrector update exceeds unity; refine the grid"
        )

    cons = spec.consumption
    if isinstance(cons, Constant):
        C, mu = cons.C, 1.0
    elif isinstance(cons, PowerConsumption):
        C, mu = cons.C, cons.mu
    else:
        C, mu = 0.0, 1.0

    taylor = np.zeros(n)
    for k, y0k in enumerate(spec.y0):
        taylor += y0k * points**k / math.factorial(k)
    f0 = (spec.y0[0] - (C if mu == 1.0 else 0.0)) / B
    singular = f0 * points**alpha / gamma(alpha + 1.0)

    # Y = taylor + singular + W with D^alpha W = W/B + g,
    # g = (taylor + singular - C)/B - f0; I^alpha g is a sum of power
    # functions and is applied exactly.
    forcing = np.zeros(n)
    for k, y0k in enumerate(spec.y0):
        forcing += y0k / B * points ** (k + alpha) / gamma(k + 1.0 + alpha)
    forcing += f0 / B * points ** (2.0 * alpha) / gamma(2.0 * alpha + 1.0)
    if C != 0.0:
        forcing -= C / B * gamma(mu) / gamma(mu + alpha) * points ** (mu + alpha - 1.0)
    forcing -= f0 * points**alpha / gamma(alpha + 1.0)

    # product-trapezoid corrector weights
    w = np.empty(n)
    w[0] = 1.0
    kk = np.arange(1, n, dtype=float)
    w[1:] = (kk + 1.0) ** (alpha + 1.0) - 2.0 * kk ** (alpha + 1.0) + \
        (kk - 1.0) ** (alpha + 1.0)
    i_arr = np.arange(n, dtype=float)
    with np.errstate(invalid="ignore"):
        a0 = (i_arr - 1.0) ** (alpha + 1.0) - (i_arr - alpha - 1.0) * i_arr**alpha
    a0[0] = 0.0
    if n > 1:
        a0[1] = alpha

    denom = 1.0 - c_corr / B
    w_vals = np.zeros(n)
    fhist = np.zeros(n)  # f_W = W / B; W(0) = 0
    for i in range(1, n):
        hist_sum = a0[i] * fhist[0]
        if i > 1:
            hist_sum += float(np.dot(w[1:i][::-1], fhist[1:i]))
        w_vals[i] = (forcing[i] + c_corr * hist_sum) / denom
        fhist[i] = w_vals[i] / B

    y = taylor + singular + w_vals
    return Trajectory(
        t=points.copy(),
        columns={"Y": y},
        metadata={
            "method": "adams_bashforth_moulton",
            "alpha": repr(spec.alpha),
            "B": repr(spec.B),
            "h": repr(h),
        },
    )


def residual_max(spec: HarrodDomarSpec, trajectory: Trajectory,
                 t_min: float = 0.1) -> float:
    """Max norm of D^alpha Y - (Y - C)/B over t >= t_min, with the Caputo
    derivative rebuilt numerically from the trajectory values (the L1 scheme
    for fractional orders below one, so no derivatives of the data are
    assumed)."""
    from .operators import L1_CAPUTO, QuadratureScheme, caputo_derivative
    from .signals import SampledSignal

    grid = Grid(trajectory.t)
    y = trajectory.series("Y")
    sig = SampledSignal(grid=grid, values=y)
    if 0.0 < spec.alpha < 1.0:
        scheme = QuadratureScheme(kind=L1_CAPUTO)
        d = caputo_derivative(spec.alpha, sig, scheme).values
    else:
        d = caputo_derivative(spec.alpha, sig).values
    c_grid = _consumption_on_grid(spec, grid.points)
    resid = d - (y - c_grid) / spec.B
    mask = grid.points >= t_min
    return float(np.max(np.abs(resid[mask])))


# ---------------------------------------------------------------------------
# growth rates and principles


@dataclass(frozen=True)
class RateReport:
    B: float
    alpha: float
    lambda_classic: float
    lambda_eff: float
    verdict: str  # "increase" | "decrease" | "unchanged"


def effective_growth_rate(B: float, alpha: float) -> RateReport:
    """Classical rate 1/B against the memory rate B^(-1/alpha)."""
    if B <= 0.0 or alpha <= 0.0:
        raise DomainError("B and alpha must be positive")
    lam = 1.0 / B
    lam_eff = B ** (-1.0 / alpha)
    if math.isclose(lam_eff, lam, rel_tol=1e-12):
        verdict = "unchanged"
    elif lam_eff > lam:
        verdict = "increase"
    else:
        verdict = "decrease"
    return RateReport(B=B, alpha=alpha, lambda_classic=lam, lambda_eff=lam_eff,
                      verdict=verdict)


def classify_principles(B_grid, alpha_grid) -> list[RateReport]:
    """Rate verdicts over the (B, alpha) product grid, row-major in B."""
    return [effective_growth_rate(B, a) for B in B_grid for a in alpha_grid]


# ---------------------------------------------------------------------------
# asymptotics


def asymptotic_solution(spec: HarrodDomarSpec, t: float, m_terms: int = 3) -> float:
    """Large-t value: exponential mode exp(B^(-1/alpha) t) with algebraic
    corrections, for fading orders in (0, 2).

    Refuses t where the first neglected algebraic term exceeds 1% of the
    exponential part, so callers cannot silently leave the validity region.
    """
    alpha, B = spec.alpha, spec.B
    if not 0.0 < alpha < 2.0:
        raise DomainError(
            f"asymptotic expansion is valid for orders in (0, 2), got {alpha!r}"
        )
    if t <= 0.0:
        raise DomainError(f"need t > 0, got {t!r}")
    cons = spec.consumption
    if isinstance(cons, Proportional):
        return asymptotic_solution(spec.rescaled_for_proportional(), t, m_terms)
    if isinstance(cons, Constant):
        C, mu = cons.C, 1.0
    elif isinstance(cons, PowerConsumption):
        C, mu = cons.C, cons.mu
    else:
        C, mu = 0.0, 1.0

    rate = B ** (-1.0 / alpha)
    exp_factor = math.exp(rate * t)
    leading = sum(
        y0k * B ** (k / alpha) / alpha * exp_factor
        for k, y0k in enumerate(spec.y0)
    )
    algebraic = 0.0
    for k, y0k in enumerate(spec.y0):
        for j in range(1, m_terms + 1):
            algebraic += y0k * B**j * rgamma(k + 1.0 - alpha * j) * t ** (k - alpha * j)
    value = leading - algebraic

    if C != 0.0:
        leading_c = -C * gamma(mu) / alpha * B ** ((mu - 1.0) / alpha) * exp_factor
        value += leading_c
        leading += leading_c
        for j in range(1, m_terms + 1):
            value += C * gamma(mu) * B ** (j - 1.0) * \
                rgamma(alpha * (1.0 - j) + mu) * t ** (alpha + mu - 1.0 - alpha * j)

    # validity guard: first neglected algebraic correction vs exponential part
    j = m_terms + 1
    neglected = max(
        (abs(y0k) * B**j * abs(rgamma(k + 1.0 - alpha * j)) * t ** (k - alpha * j)
         for k, y0k in enumerate(spec.y0)),
        default=0.0,
    )
    if C != 0.0:
        neglected = max(
            neglected,
            abs(C * gamma(mu) * B ** (j - 1.0) * rgamma(alpha * (1.0 - j) + mu)
                * t ** (alpha + mu - 1.0 - alpha * j)),
        )
    if neglected > 0.01 * abs(leading):
        raise DomainError(
            f"t={t!r} is outside the asymptotic validity region: the first "
            f"neglected term is {neglected:.3e} against leading {leading:.3e}"
        )
    return value
