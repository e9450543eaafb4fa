"""Chebyshev polynomials of the second kind by three-term recurrence."""

from __future__ import annotations

import numpy as np


def chebyshev_u(n: int, x, derivatives: int = 0):
    """U_n(x) and optionally its first ``derivatives`` derivatives.

    Uses U_{k+1} = 2x U_k - U_{k-1} differentiated term by term, so the
    derivatives are exact up to rounding.  Returns a tuple
    ``(U, U', U'')[: derivatives + 1]``.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    u_prev, u = np.zeros_like(x), np.ones_like(x)
    d_prev, d = np.zeros_like(x), np.zeros_like(x)
    dd_prev, dd = np.zeros_like(x), np.zeros_like(x)
    for _ in range(n):
        u_next = 2 * x * u - u_prev
        d_next = 2 * u + 2 * x * d - d_prev
        dd_next = 4 * d + 2 * x * dd - dd_prev
        u_prev, u = u, u_next
        d_prev, d = d, d_next
        dd_prev, dd = dd, dd_next
    return (u, d, dd)[: derivatives + 1] if derivatives else u


def chebyshev_u_coefficients(n: int) -> np.ndarray:
    """Power-basis coefficients (ascending) of U_n."""
    prev, cur = np.zeros(1), np.ones(1)
    for _ in range(n):
        nxt = np.zeros(len(cur) + 1)
        nxt[1:] += 2 * cur
        nxt[: len(prev)] -= prev
        prev, cur = cur, nxt
    return cur


def u_from_circle(s: int, zeta):
    """zeta^{1-s} (zeta^{2s} - 1) / (zeta^2 - 1), which equals U_{s-1}((zeta + 1/zeta)/2)."""
    zeta = np.asarray(zeta, dtype=complex)
    return sum(zeta ** (2 * k + 1 - s) for k in range(s))


def ode_residual(s: int, x):
    """(x^2 - 1) y'' + 3 x y' + (1 - s^2) y for y = U_{s-1}."""
    y, dy, ddy = chebyshev_u(s - 1, x, derivatives=2)
    x = np.asarray(x, dtype=float)
    return (x * x - 1) * ddy + 3 * x * dy + (1 - s * s) * y
