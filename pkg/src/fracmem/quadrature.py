"""Adaptive Gauss-Legendre quadrature used for order-integrals and kernel moments.

Bisection-based refinement with a fixed 15-node rule per panel.  Endpoint
singularities of integrable power type are resolved by the geometric chain of
panels shrinking toward the singular end; integrands are never evaluated at
panel endpoints.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import IntegrabilityError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)

MAX_DEPTH = 200


def gauss_legendre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def fixed_panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    """15-node Gauss-Legendre estimate of the integral of f over [a, b]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return float(half * np.sum(_GL_WEIGHTS * f(mid + half * _GL_NODES)))


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
) -> float:
    """Integrate a vectorized callable over [a, b] to absolute/relative tol.

    A panel is accepted when the whole-panel estimate and the two-half
    estimate agree within tol * max(1, |panel value|); otherwise the panel is
    bisected.  Raises IntegrabilityError when the depth cap is exhausted,
    which in practice means a non-integrable singularity.
    """
    if a == b:
        return 0.0
    total = 0.0
    # explicit stack of (a, b, whole_estimate, depth)
    stack = [(a, b, fixed_panel(f, a, b), 0)]
    while stack:
        pa, pb, whole, depth = stack.pop()
        mid = 0.5 * (pa + pb)
        left = fixed_panel(f, pa, mid)
        right = fixed_panel(f, mid, pb)
        halves = left + right
        if abs(halves - whole) <= tol * max(1.0, abs(halves)) or mid in (pa, pb):
            total += halves
            continue
        if depth >= MAX_DEPTH:
            raise IntegrabilityError(
                f"quadrature on [{a!r}, {b!r}] did not converge to {tol!r}; "
                "the integrand may not be integrable"
            )
        stack.append((pa, mid, left, depth + 1))
        stack.append((mid, pb, right, depth + 1))
    return total
