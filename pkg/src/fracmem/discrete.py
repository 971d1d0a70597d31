"""Discrete multiplier map with power-law memory.

Two equivalent forms of the same map: the direct weighted sum over the whole
history, and a recursion that updates the previous output with V_alpha
increments.  Their agreement (to roundoff) is the core correctness check.
All sums run in a fixed ascending-index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special import gamma

__all__ = ["v_alpha", "map_direct", "MapState", "map_step", "map_iterate"]


def v_alpha(alpha: float, z: float) -> float:
    """V_alpha(z) = (z + 1)^(alpha-1) - z^(alpha-1) for z > 0."""
    if z <= 0.0:
        raise DomainError(f"z must be positive, got {z!r}")
    return (z + 1.0) ** (alpha - 1.0) - z ** (alpha - 1.0)


def _coefficient(m: float, alpha: float, T: float) -> float:
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if T <= 0.0:
        raise DomainError(f"sampling period must be positive, got {T!r}")
    return m * T ** (alpha - 1.0) / gamma(alpha)


def map_direct(m: float, alpha: float, T: float, x) -> float:
    """Y_{N+1} = (m T^(alpha-1) / Gamma(alpha)) sum_{k=0}^{N} (N+1-k)^(alpha-1) x_k."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise DomainError("history must contain at least one sample")
    c = _coefficient(m, alpha, T)
    n_plus_1 = x.size
    lags = np.arange(n_plus_1, 0, -1, dtype=float)  # N+1-k for k = 0..N
    return c * float(np.dot(lags ** (alpha - 1.0), x))


@dataclass(frozen=True)
class MapState:
    """Value state of the map: consumed history x_0..x_{N-1} and Y_N."""

    m: float
    alpha: float
    T: float
    history: tuple[float, ...] = ()
    y: float = 0.0

    def __post_init__(self):
        _coefficient(self.m, self.alpha, self.T)

    @property
    def n(self) -> int:
        return len(self.history)


def map_step(state: MapState, x_n: float) -> MapState:
    """Advance one sampling period:
    Y_{N+1} = Y_N + c x_N + c sum_{k=0}^{N-1} V_alpha(N - k) x_k."""
    c = _coefficient(state.m, state.alpha, state.T)
    n = state.n
    increment = c * x_n
    if n > 0:
        hist = np.asarray(state.history)
        z = np.arange(n, 0, -1, dtype=float)  # N - k for k = 0..N-1
        v = (z + 1.0) ** (state.alpha - 1.0) - z ** (state.alpha - 1.0)
        increment += c * float(np.dot(v, hist))
    return MapState(
        m=state.m,
        alpha=state.alpha,
        T=state.T,
        history=state.history + (float(x_n),),
        y=state.y + increment,
    )


def map_iterate(m: float, alpha: float, T: float, x) -> np.ndarray:
    """Run the recursion over the whole input, returning Y_1..Y_{N+1}.

    Identical arithmetic to chaining map_step, with the history kept in a
    preallocated array.
    """
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise DomainError("history must contain at least one sample")
    c = _coefficient(m, alpha, T)
    n_total = x.size
    # v_weights[z] = V_alpha(z) for z >= 1
    z = np.arange(1, n_total + 1, dtype=float)
    v = (z + 1.0) ** (alpha - 1.0) - z ** (alpha - 1.0)
    out = np.empty(n_total)
    y = 0.0
    for n in range(n_total):
        increment = c * x[n]
        if n > 0:
            increment += c * float(np.dot(v[n - 1:: -1][: n], x[:n]))
        y += increment
        out[n] = y
    return out
