"""Reference integration that shares nothing with the node/weight rules.

Every integral is reduced to a finite parameter interval and integrated by
adaptive bisection with a 15-point Gauss-Legendre panel rule.  A panel is
accepted when its one-panel value and the sum over its two halves agree
within its share of the global tolerance; the reported value is the refined
(two-half) sum, so the error estimate is conservative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence

PANEL_ORDER = 15
_X, _W = np.polynomial.legendre.leggauss(PANEL_ORDER)
_EPS = np.finfo(float).eps

DEFAULT_REL_TOL = 1e-12
DEFAULT_ABS_TOL = 1e-14
MAX_EVALUATIONS = 1_000_000


@dataclass(frozen=True)
class OracleResult:
    value: complex | float
    abs_error_estimate: float
    subdivisions: int
    converged: bool
    evaluations: int = 0


def _panels(h, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _X[None, :]
    vals = np.asarray(h(x))
    if vals.shape != x.shape:
        vals = np.broadcast_to(vals, x.shape)
    return half * (vals @ _W), half * (np.abs(vals) @ _W)


def adaptive_integrate(
    h,
    a: float,
    b: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_evaluations: int = MAX_EVALUATIONS,
    initial_panels: int = 16,
) -> OracleResult:
    """Integrate a vectorised ``h`` over ``[a, b]``.

    The tolerance actually targeted is ``max(rel_tol |I|, abs_tol, floor)``
    where ``floor = 64 eps * integral of |h|`` is the attainable roundoff
    level; a panel whose disagreement is already at roundoff is accepted.
    """
    width = float(b - a)
    edges = np.linspace(a, b, initial_panels + 1)
    pa, pb = edges[:-1], edges[1:]
    whole, _ = _panels(h, pa, pb)
    evaluations = PANEL_ORDER * len(pa)

    acc_val = 0.0
    acc_err = 0.0
    acc_abs = 0.0
    accepted = 0
    while True:
        mid = 0.5 * (pa + pb)
        left, left_abs = _panels(h, pa, mid)
        right, right_abs = _panels(h, mid, pb)
        evaluations += 2 * PANEL_ORDER * len(pa)
        refined = left + right
        refined_abs = left_abs + right_abs
        err = np.abs(refined - whole)

        estimate = acc_val + refined.sum()
        total_abs = acc_abs + refined_abs.sum()
        target = max(rel_tol * abs(estimate), abs_tol, 64 * _EPS * total_abs)
        ok = (err <= target * (pb - pa) / width) | (err <= 64 * _EPS * refined_abs)

        acc_val = acc_val + refined[ok].sum()
        acc_err += float(err[ok].sum())
        acc_abs += float(refined_abs[ok].sum())
        accepted += int(ok.sum())

        keep = ~ok
        if not keep.any():
            break
        if evaluations > max_evaluations:
            partial = OracleResult(acc_val + refined[keep].sum(), acc_err + float(err[keep].sum()),
                                   accepted + int(keep.sum()), False, evaluations)
            raise NonConvergence(
                f"adaptive integration exceeded {max_evaluations} evaluations", partial
            )
        pa, pb, mid = pa[keep], pb[keep], mid[keep]
        whole = np.concatenate([left[keep], right[keep]])
        pa, pb = np.concatenate([pa, mid]), np.concatenate([mid, pb])

    value = acc_val
    floor = 64 * _EPS * acc_abs
    converged = acc_err <= max(rel_tol * abs(value), abs_tol, floor)
    if np.iscomplexobj(value):
        value = complex(value)
    else:
        value = float(value)
    return OracleResult(value, acc_err, 2 * accepted, bool(converged), evaluations)


def integrate_circle(g, r: float, **kw) -> OracleResult:
    """Arc-length integral of ``g`` over ``|z| = r``."""
    r = float(r)
    return adaptive_integrate(lambda t: g(r * np.exp(1j * t)) * r, 0.0, 2 * np.pi, **kw)


def integrate_trig(g, **kw) -> OracleResult:
    """Integral of ``g(t)`` over ``[0, 2 pi]``."""
    return adaptive_integrate(g, 0.0, 2 * np.pi, **kw)


def integrate_segment_weighted(g, **kw) -> OracleResult:
    """Integral of ``g(x) / sqrt(1 - x^2)`` over ``[-1, 1]`` via ``x = cos t``."""
    return adaptive_integrate(lambda t: g(np.cos(t)), 0.0, np.pi, **kw)


def integrate_real_line(g, **kw) -> OracleResult:
    """Integral of ``g`` over the real line via ``x = tan(u / 2)``.

    ``g`` must decay at least like ``|x|**-2``.
    """

    def h(u):
        x = np.tan(0.5 * u)
        return g(x) * (0.5 * (1.0 + x * x))

    return adaptive_integrate(h, -np.pi, np.pi, **kw)


def lp_norm(g, domain: str, p: float, r: float = 1.0, **kw) -> OracleResult:
    """L_p norm of ``g`` on one of the supported domains.

    ``domain`` is ``"circle"`` (arc length on ``|z| = r``), ``"trig"``
    (``g`` a function of ``t`` on ``[0, 2 pi]``), ``"segment"`` (Chebyshev
    weight on ``[-1, 1]``) or ``"line"``.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p!r}")

    def power(z):
        return np.abs(g(z)) ** p

    if domain == "circle":
        res = integrate_circle(power, r, **kw)
    elif domain == "trig":
        res = integrate_trig(power, **kw)
    elif domain == "segment":
        res = integrate_segment_weighted(power, **kw)
    elif domain == "line":
        res = integrate_real_line(power, **kw)
    else:
        raise ValueError(f"unknown domain {domain!r}")
    total = float(np.real(res.value))
    value = total ** (1.0 / p)
    err = res.abs_error_estimate * value / (p * total) if total > 0 else res.abs_error_estimate
    return OracleResult(value, err, res.subdivisions, res.converged, res.evaluations)
