"""Seeded random configurations and admissible functions for property checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import CirclePoleConfig, HalfPlanePoleConfig, SegmentPoleConfig
from .rational import RationalFunction, SimplePartialFraction, Term

RADII = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class SamplerConfig:
    max_n: int = 5
    max_s: int = 3
    inner_fraction: float = 0.9  # |z_k| <= inner_fraction * r
    min_separation: float = 0.05  # relative to r
    max_coef: float = 10.0


def _coef(rng: np.random.Generator, scale: float) -> complex:
    mag = rng.uniform(0.1, 1.0) * scale
    return complex(mag * np.exp(2j * np.pi * rng.uniform()))


def _scatter(rng, count, draw, min_sep, attempts=10_000):
    pts: list[complex] = []
    for _ in range(attempts):
        if len(pts) == count:
            return pts
        z = draw()
        if all(abs(z - q) >= min_sep for q in pts):
            pts.append(z)
    raise RuntimeError("could not place well-separated points")


def random_circle_config(rng, n: int | None = None, r: float | None = None,
                         opts: SamplerConfig = SamplerConfig()) -> CirclePoleConfig:
    n = int(rng.integers(1, opts.max_n + 1)) if n is None else n
    r = float(rng.choice(RADII)) if r is None else r

    def draw():
        rad = opts.inner_fraction * r * np.sqrt(rng.uniform())
        return complex(rad * np.exp(2j * np.pi * rng.uniform()))

    pts = _scatter(rng, n, draw, opts.min_separation * r)
    # the origin is always present; drop the draw closest to it
    pts.sort(key=abs)
    return CirclePoleConfig.with_origin(r, pts[1:])


def random_halfplane_config(rng, n: int | None = None,
                            opts: SamplerConfig = SamplerConfig()) -> HalfPlanePoleConfig:
    n = int(rng.integers(1, opts.max_n + 1)) if n is None else n

    def draw():
        return complex(rng.uniform(-2, 2), rng.uniform(0.2, 2))

    return HalfPlanePoleConfig(tuple(_scatter(rng, n, draw, opts.min_separation)))


def random_segment_config(rng, n: int | None = None) -> SegmentPoleConfig:
    """``n`` counts the point at infinity; finite poles come with conjugates."""
    n = int(rng.integers(1, 4)) if n is None else n

    def draw():
        if rng.uniform() < 0.25:
            return complex(rng.choice([-1, 1]) * rng.uniform(1.3, 3.0), 0.0)
        return complex(rng.uniform(-2, 2), rng.uniform(0.3, 2))

    pts: list[complex] = []
    while len(pts) < n - 1:
        w = draw()
        if all(abs(w - q) > 0.1 and abs(w - q.conjugate()) > 0.1 for q in pts):
            pts.append(w)
    return SegmentPoleConfig(tuple(pts))


def _terms(rng, poles, s, max_coef, full_order=False):
    terms = []
    for p in poles:
        top = s if full_order else int(rng.integers(1, s + 1))
        for k in range(1, top + 1):
            terms.append(Term(complex(p), k, _coef(rng, max_coef)))
    return terms


def _poly(rng, length, max_coef):
    return [_coef(rng, max_coef) for _ in range(length)]


def random_circle_function(rng, cfg: CirclePoleConfig, s: int, kind: str = "circle-integral",
                           boundary: bool = False,
                           opts: SamplerConfig = SamplerConfig()) -> RationalFunction:
    """Admissible f for the integral (kind ``circle-integral``) or L2 rule.

    With ``boundary`` every finite pole gets multiplicity ``s`` and the
    0/infinity multiplicities sit on their limit.
    """
    finite = [z for z in cfg.inner_poles[1:]]
    finite += [q for q in cfg.reflected_poles[1:]]
    terms = _terms(rng, finite, s, opts.max_coef, full_order=boundary)
    if kind == "circle-integral":
        deg_inf = s - 1 if boundary else int(rng.integers(0, s))
        deg_0 = s - 1 if boundary else int(rng.integers(0, s))
    elif kind == "circle-l2":
        total = 2 * s - 1 if boundary else int(rng.integers(0, 2 * s))
        deg_0 = int(rng.integers(0, total + 1))
        deg_inf = total - deg_0
    else:
        raise ValueError(kind)
    # constant term of modulus >= 1 keeps integrals away from zero
    poly = [complex(rng.uniform(1.0, opts.max_coef) * np.exp(2j * np.pi * rng.uniform()))]
    poly += _poly(rng, deg_inf, opts.max_coef)
    return RationalFunction(tuple(terms), poly=tuple(poly), poly_inv=tuple(_poly(rng, deg_0, opts.max_coef)))


def random_segment_function(rng, cfg: SegmentPoleConfig, s: int, boundary: bool = False,
                            opts: SamplerConfig = SamplerConfig()) -> RationalFunction:
    terms = _terms(rng, cfg.finite_poles, s, 1.0, full_order=boundary)
    deg = s - 1 if boundary else int(rng.integers(0, s))
    poly = [complex(rng.uniform(1.0, opts.max_coef))] + _poly(rng, deg, opts.max_coef)
    return RationalFunction(tuple(terms), poly=tuple(poly))


def random_halfplane_function(rng, cfg: HalfPlanePoleConfig, s: int, boundary: bool = False,
                              opts: SamplerConfig = SamplerConfig()) -> RationalFunction:
    return RationalFunction(tuple(_terms(rng, cfg.all_poles, s, opts.max_coef, full_order=boundary)))


def random_spf(rng, n: int | None = None, r: float | None = None,
               opts: SamplerConfig = SamplerConfig()) -> SimplePartialFraction:
    """Poles inside ``|z| < 0.9 r`` when ``r`` is given, else in the upper half-plane."""
    n = int(rng.integers(1, opts.max_n + 1)) if n is None else n
    if r is None:
        return SimplePartialFraction(random_halfplane_config(rng, n, opts).upper_poles)

    def draw():
        rad = opts.inner_fraction * r * np.sqrt(rng.uniform())
        return complex(rad * np.exp(2j * np.pi * rng.uniform()))

    return SimplePartialFraction(tuple(_scatter(rng, n, draw, opts.min_separation * r)))


def random_tail(rng, cfg: CirclePoleConfig, s: int, scale: float = 1.0) -> RationalFunction:
    """Proper fraction with poles on the reflected set only."""
    poles = [q for q in cfg.reflected_poles[1:]]
    return RationalFunction(tuple(_terms(rng, poles, s, scale)))


def random_trig(rng, s: int, scale: float = 1.0):
    """Complex Laurent coefficients for powers 1-s .. s-1 and their low index."""
    k = 2 * s - 1
    return scale * (rng.standard_normal(k) + 1j * rng.standard_normal(k)), 1 - s


def random_poly(rng, degree: int, real: bool = False):
    c = rng.standard_normal(degree + 1)
    if not real:
        c = c + 1j * rng.standard_normal(degree + 1)
    return c
