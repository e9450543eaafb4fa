"""Small closed-form rules that can be checked by hand.

Two explicit formulas with fixed abscissae (a four-point Chebyshev-weighted
formula on [-1, 1] for functions with poles at +-i, and a six-point
formula on the real line), plus the Gauss-Chebyshev special case of the
segment rule.
"""

from __future__ import annotations

import math

import numpy as np

from .blaschke import SegmentPoleConfig, HalfPlanePoleConfig
from .oracle import integrate_real_line, integrate_segment_weighted
from .quadrature import halfplane_l2, segment_integral, segment_integral_rule, segment_l2
from .rational import RationalFunction, Term

SQRT3 = math.sqrt(3.0)
A_NODE = 2 + SQRT3
B_NODE = 2 - SQRT3


def _abs2(v):
    return (v * np.conj(v)).real


def segment_four_point(f) -> float:
    """pi/(3 sqrt 2) (|f(1)|^2 + 8/5 |f(sqrt(3/5))|^2 + 8/7 |f(sqrt(1/7))|^2 + 1/2 |f(0)|^2)."""
    x = np.array([1.0, math.sqrt(3 / 5), math.sqrt(1 / 7), 0.0], dtype=complex)
    w = np.array([1.0, 8 / 5, 8 / 7, 0.5])
    return float(np.pi / (3 * math.sqrt(2)) * np.dot(w, _abs2(f(x))))


def halfplane_six_point(f) -> float:
    """pi/3 (|f(+-1)|^2 + 2a |f(+-a)|^2 + 2b |f(+-b)|^2), a, b = 2 +- sqrt 3."""
    x = np.array([1, -1, A_NODE, -A_NODE, B_NODE, -B_NODE], dtype=complex)
    w = np.array([1, 1, 2 * A_NODE, 2 * A_NODE, 2 * B_NODE, 2 * B_NODE])
    return float(np.pi / 3 * np.dot(w, _abs2(f(x))))


def inverse_power(s: int, pole: complex = 1j) -> RationalFunction:
    return RationalFunction((Term(pole, s, 1.0),))


def segment_example(s_max: int = 7):
    """Rows ``(s, four_point, rule, oracle)`` for f = 1/(x - i)^s."""
    cfg = SegmentPoleConfig((1j,))
    rows = []
    for s in range(1, s_max + 1):
        f = inverse_power(s)
        oracle = integrate_segment_weighted(lambda x: _abs2(f(x.astype(complex)))).value
        rows.append((s, segment_four_point(f), segment_l2(f, cfg, s, 0.0), float(oracle)))
    return rows


def random_pm_i_function(rng, max_order: int = 3) -> RationalFunction:
    """Proper fraction with poles at +-i of multiplicity <= ``max_order``."""
    terms = []
    for pole in (1j, -1j):
        for k in range(1, max_order + 1):
            c = complex(rng.standard_normal(), rng.standard_normal())
            terms.append(Term(pole, k, c))
    return RationalFunction(tuple(terms))


def halfplane_example(rng, count: int = 3):
    """Rows ``(six_point, rule, oracle)`` for random admissible f, s = 3."""
    cfg = HalfPlanePoleConfig((1j,))
    rows = []
    for _ in range(count):
        f = random_pm_i_function(rng)
        oracle = integrate_real_line(lambda x: _abs2(f(x.astype(complex)))).value
        rows.append((halfplane_six_point(f), halfplane_l2(f, cfg, 3, np.pi), float(oracle)))
    return rows


def chebyshev_moment(k: int) -> float:
    """Integral of x^k / sqrt(1 - x^2) over [-1, 1]."""
    if k % 2:
        return 0.0
    return math.pi * math.comb(k, k // 2) / 2.0**k


def gauss_chebyshev_abscissae(s: int) -> np.ndarray:
    """Distinct abscissae of the segment rule with infinity only, level 2s, phi = pi."""
    rule = segment_integral_rule(SegmentPoleConfig(()), 2 * s, np.pi)
    x = np.sort(rule.nodes.real)
    # circle nodes come in conjugate pairs mapping to the same abscissa
    return x[::2]


def gauss_chebyshev_check(rng, s: int, count: int = 20):
    """Return ``(node error, worst relative moment error)`` for level ``s``."""
    expected = np.sort(np.cos((2 * np.arange(1, s + 1) - 1) * np.pi / (2 * s)))
    node_err = float(np.max(np.abs(gauss_chebyshev_abscissae(s) - expected)))
    cfg = SegmentPoleConfig(())
    worst = 0.0
    for _ in range(count):
        c = rng.standard_normal(2 * s)
        exact = sum(ck * chebyshev_moment(k) for k, ck in enumerate(c))
        value = segment_integral(RationalFunction.polynomial(c), cfg, 2 * s, np.pi)
        worst = max(worst, abs(value - exact) / abs(exact))
    return node_err, worst
