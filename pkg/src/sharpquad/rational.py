"""Complex rational functions in partial-fraction form.

A :class:`RationalFunction` is stored as

    sum_j c_j / (z - p_j)**k_j  +  sum_{k>=0} a_k z**k  +  sum_{k>=1} b_k z**(-k)

so the pole at infinity is carried by the polynomial tail ``poly`` and the
pole at the origin by ``poly_inv``.  Nothing here ever factors a
denominator; pole locations and multiplicities are read off directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, PoleProximity

# evaluation refuses points closer than this (times scale) to a pole
PROXIMITY_TOL = 1e-12


class _PointAtInfinity:
    """Singleton marker for the point at infinity in pole maps."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_PointAtInfinity, ())

    def __hash__(self):
        return hash("sharpquad.INFINITY")


INFINITY = _PointAtInfinity()


def as_complex(value) -> complex:
    """Accept a complex/real scalar or a two-element ``[re, im]`` pair."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"complex pair must have two entries, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


@dataclass(frozen=True)
class Term:
    pole: complex
    order: int
    coef: complex

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ConfigError(f"term order must be a positive integer, got {self.order!r}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "pole", complex(self.pole))
        object.__setattr__(self, "coef", complex(self.coef))


def _trim(coeffs: Iterable) -> tuple[complex, ...]:
    out = [complex(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _pad_add(a: Sequence[complex], b: Sequence[complex]) -> list[complex]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


@dataclass(frozen=True)
class RationalFunction:
    """Partial fractions plus Laurent tails; always stored normalized.

    ``poly[k]`` multiplies ``z**k``; ``poly_inv[k]`` multiplies ``z**-(k+1)``.
    """

    terms: tuple[Term, ...] = ()
    poly: tuple[complex, ...] = ()
    poly_inv: tuple[complex, ...] = ()

    def __post_init__(self):
        merged: dict[tuple[complex, int], complex] = {}
        inv = list(self.poly_inv)
        for t in self.terms:
            if not isinstance(t, Term):
                t = Term(*t)
            if t.pole == 0:
                # c / z**k belongs to the 1/z tail
                while len(inv) < t.order:
                    inv.append(0)
                inv[t.order - 1] += t.coef
                continue
            key = (t.pole, t.order)
            merged[key] = merged.get(key, 0) + t.coef
        terms = tuple(
            sorted(
                (Term(p, k, c) for (p, k), c in merged.items() if c != 0),
                key=lambda t: (t.pole.real, t.pole.imag, t.order),
            )
        )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "poly", _trim(self.poly))
        object.__setattr__(self, "poly_inv", _trim(inv))

    # construction helpers -------------------------------------------------

    @classmethod
    def polynomial(cls, coeffs: Sequence) -> "RationalFunction":
        return cls(poly=tuple(coeffs))

    @classmethod
    def laurent(cls, coeffs: Sequence, low: int) -> "RationalFunction":
        """Laurent polynomial with ``coeffs[i]`` multiplying ``z**(low + i)``."""
        poly: list[complex] = []
        inv: list[complex] = []
        for i, c in enumerate(coeffs):
            k = low + i
            if k >= 0:
                while len(poly) <= k:
                    poly.append(0)
                poly[k] += c
            else:
                while len(inv) < -k:
                    inv.append(0)
                inv[-k - 1] += c
        return cls(poly=tuple(poly), poly_inv=tuple(inv))

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(poly=(complex(c),))

    @classmethod
    def pole_term(cls, pole, order: int = 1, coef=1.0) -> "RationalFunction":
        return cls(terms=(Term(pole, order, coef),))

    # structure ------------------------------------------------------------

    def normalized(self) -> "RationalFunction":
        return RationalFunction(self.terms, self.poly, self.poly_inv)

    @property
    def poles(self) -> tuple[complex, ...]:
        return tuple(sorted({t.pole for t in self.terms}, key=lambda p: (p.real, p.imag)))

    def scale(self, radius: float = 0.0) -> float:
        mags = [abs(p) for p in self.poles]
        return max([1.0, float(radius)] + mags)

    def pole_profile(self) -> dict:
        """Pole -> multiplicity, with ``0j`` and :data:`INFINITY` for the tails."""
        profile: dict = {}
        for t in self.terms:
            profile[t.pole] = max(profile.get(t.pole, 0), t.order)
        if self.poly_inv:
            profile[0j] = len(self.poly_inv)
        if len(self.poly) > 1:
            profile[INFINITY] = len(self.poly) - 1
        return profile

    def is_proper(self) -> bool:
        """True when the function vanishes at infinity."""
        return not self.poly

    def conj(self) -> "RationalFunction":
        return RationalFunction(
            tuple(Term(t.pole.conjugate(), t.order, t.coef.conjugate()) for t in self.terms),
            tuple(c.conjugate() for c in self.poly),
            tuple(c.conjugate() for c in self.poly_inv),
        )

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            other = RationalFunction.constant(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return RationalFunction(
            self.terms + other.terms,
            tuple(_pad_add(self.poly, other.poly)),
            tuple(_pad_add(self.poly_inv, other.poly_inv)),
        )

    __radd__ = __add__

    def __mul__(self, c):
        if not isinstance(c, (int, float, complex, np.number)):
            return NotImplemented
        c = complex(c)
        return RationalFunction(
            tuple(Term(t.pole, t.order, c * t.coef) for t in self.terms),
            tuple(c * a for a in self.poly),
            tuple(c * a for a in self.poly_inv),
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    # evaluation -------------------------------------------------------------

    def __call__(self, z, *, radius: float = 0.0):
        return evaluate(self, z, radius=radius)

    # serialization ----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "terms": [
                {"pole": complex_pair(t.pole), "order": t.order, "coef": complex_pair(t.coef)}
                for t in self.terms
            ],
            "poly": [complex_pair(c) for c in self.poly],
            "poly_inv": [complex_pair(c) for c in self.poly_inv],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RationalFunction":
        try:
            terms = tuple(
                Term(as_complex(t["pole"]), int(t["order"]), as_complex(t["coef"]))
                for t in data.get("terms", [])
            )
            poly = tuple(as_complex(c) for c in data.get("poly", []))
            poly_inv = tuple(as_complex(c) for c in data.get("poly_inv", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed rational function: {exc}") from exc
        return cls(terms, poly, poly_inv)


def evaluate(f: RationalFunction, z, *, radius: float = 0.0):
    """Evaluate ``f`` at a scalar or array of points.

    Raises :class:`PoleProximity` when a point is within
    ``1e-12 * scale`` of a pole, where scale = max(1, max|pole|, radius).
    """
    zz = np.asarray(z, dtype=complex)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    tol = PROXIMITY_TOL * f.scale(radius)

    out = np.zeros(zz.shape, dtype=complex)
    by_pole: dict[complex, list[Term]] = {}
    for t in f.terms:
        by_pole.setdefault(t.pole, []).append(t)
    for pole, terms in by_pole.items():
        d = zz - pole
        close = np.abs(d) < tol
        if close.any():
            raise PoleProximity(pole, complex(zz[close][0]))
        coef = {t.order: t.coef for t in terms}
        power = np.ones_like(d)
        for k in range(1, max(coef) + 1):
            power = power * d
            if k in coef:
                out += coef[k] / power

    if f.poly:
        acc = np.zeros_like(zz)
        for c in reversed(f.poly):
            acc = acc * zz + c
        out += acc
    if f.poly_inv:
        close = np.abs(zz) < tol
        if close.any():
            raise PoleProximity(0j, complex(zz[close][0]))
        w = 1.0 / zz
        acc = np.zeros_like(zz)
        for c in reversed(f.poly_inv):
            acc = (acc + c) * w
        out += acc
    return complex(out[0]) if scalar else out


def abs_squared_on_contour(f, z, **kw):
    """``|f(z)|**2``; the integrand of every L2 rule."""
    v = f(z, **kw) if kw else f(z)
    return (v * np.conj(v)).real


def pole_multiplicity_profile(f) -> dict:
    return f.pole_profile()


@dataclass(frozen=True)
class SimplePartialFraction:
    """rho(z) = sum_k 1/(z - z_k): every pole simple with residue one."""

    poles: tuple[complex, ...]

    def __post_init__(self):
        poles = tuple(complex(p) for p in self.poles)
        if not poles:
            raise ConfigError("simple partial fraction needs at least one pole")
        object.__setattr__(self, "poles", poles)

    @property
    def n(self) -> int:
        return len(self.poles)

    def to_rational(self) -> RationalFunction:
        return RationalFunction(tuple(Term(p, 1, 1.0) for p in self.poles))

    def __call__(self, z, **kw):
        zz = np.asarray(z, dtype=complex)
        out = np.zeros(zz.shape, dtype=complex)
        scale = max([1.0, kw.get("radius", 0.0)] + [abs(p) for p in self.poles])
        for p in self.poles:
            d = zz - p
            if np.any(np.abs(d) < PROXIMITY_TOL * scale):
                raise PoleProximity(p)
            out = out + 1.0 / d
        return complex(out) if zz.ndim == 0 else out

    def pole_profile(self) -> dict:
        return {p: 1 for p in self.poles}

    def is_proper(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {"poles": [complex_pair(p) for p in self.poles]}

    @classmethod
    def from_dict(cls, data: dict) -> "SimplePartialFraction":
        try:
            return cls(tuple(as_complex(p) for p in data["poles"]))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed simple partial fraction: {exc}") from exc
