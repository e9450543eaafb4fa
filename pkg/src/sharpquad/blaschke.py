"""Blaschke products, their weight functions and the node solver.

Three domains are supported:

* circle ``|z| = r`` with inner poles (always containing the origin) and
  their reflections ``r**2 / conj(z_k)``;
* the segment ``[-1, 1]``, handled by pulling the pole set back to the unit
  disk through the Joukowski map ``w = (v + 1/v) / 2``;
* the real line with poles in the upper half-plane and their conjugates.

On every contour ``|B| = 1`` and ``arg B`` increases strictly, with speed
given by the positive weight ``mu``.  The nodes of the quadrature rules are
the solutions of ``B**s = exp(i phi)``; they are found by bracketed Newton
iteration on a closed-form continuous phase, so no sampled unwrapping is
needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BranchAmbiguity,
    ConfigError,
    NodeResidual,
    OffContour,
    PhiAtInfinityNode,
    PoleProximity,
)
from .rational import INFINITY, as_complex, complex_pair

TWO_PI = 2.0 * np.pi

POLE_SEPARATION = 1e-9
CONTOUR_GUARD = 1e-6
ON_CONTOUR_TOL = 1e-10
RESIDUAL_TOL = 1e-11
PHASE_TOL = 1e-13
MAX_NEWTON = 80
BRANCH_TOL = 1e-8


def _distinct(points: Sequence[complex], tol: float, what: str) -> None:
    pts = np.asarray(points, dtype=complex)
    if len(pts) < 2:
        return
    d = np.abs(pts[:, None] - pts[None, :])
    d[np.diag_indices(len(pts))] = np.inf
    if d.min() < tol:
        raise ConfigError(f"{what} must be pairwise distinct (min separation {d.min():.3e})")


# --------------------------------------------------------------------------
# configurations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CirclePoleConfig:
    """Inner poles of a circle configuration; the origin is always one of them."""

    radius: float
    inner_poles: tuple[complex, ...]

    def __post_init__(self):
        r = float(self.radius)
        if not np.isfinite(r) or r <= 0:
            raise ConfigError(f"radius must be positive and finite, got {self.radius!r}")
        poles = tuple(as_complex(p) for p in self.inner_poles)
        if not any(p == 0 for p in poles):
            raise ConfigError("inner poles must contain the origin")
        if not all(np.isfinite(p.real) and np.isfinite(p.imag) for p in poles):
            raise ConfigError("inner poles must be finite")
        if max(abs(p) for p in poles) > r * (1 - CONTOUR_GUARD):
            raise ConfigError("inner poles must satisfy |z| <= r (1 - 1e-6)")
        _distinct(poles, POLE_SEPARATION * r, "inner poles")
        # origin first, the rest in input order
        poles = (0j,) + tuple(p for p in poles if p != 0)
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "inner_poles", poles)

    @classmethod
    def with_origin(cls, radius: float, poles: Sequence = ()) -> "CirclePoleConfig":
        poles = [as_complex(p) for p in poles]
        return cls(radius, tuple([0j] + [p for p in poles if p != 0]))

    @property
    def n(self) -> int:
        return len(self.inner_poles)

    @property
    def reflected_poles(self) -> tuple:
        r2 = self.radius**2
        return tuple(INFINITY if p == 0 else r2 / p.conjugate() for p in self.inner_poles)

    @property
    def scale(self) -> float:
        return max(1.0, self.radius)

    def to_dict(self) -> dict:
        return {
            "domain": "circle",
            "radius": self.radius,
            "poles": [complex_pair(p) for p in self.inner_poles],
        }


@dataclass(frozen=True)
class HalfPlanePoleConfig:
    """Poles ``z_k`` in the open upper half-plane; conjugates are implied."""

    upper_poles: tuple[complex, ...]

    def __post_init__(self):
        poles = tuple(as_complex(p) for p in self.upper_poles)
        if not poles:
            raise ConfigError("half-plane configuration needs at least one pole")
        if not all(np.isfinite(p.real) and np.isfinite(p.imag) for p in poles):
            raise ConfigError("half-plane poles must be finite")
        scale = max([1.0] + [abs(p) for p in poles])
        if min(p.imag for p in poles) < CONTOUR_GUARD * scale:
            raise ConfigError("half-plane poles need Im z >= 1e-6 * scale")
        _distinct(poles, POLE_SEPARATION * scale, "half-plane poles")
        object.__setattr__(self, "upper_poles", poles)

    @property
    def n(self) -> int:
        return len(self.upper_poles)

    @property
    def scale(self) -> float:
        return max([1.0] + [abs(p) for p in self.upper_poles])

    @property
    def all_poles(self) -> tuple[complex, ...]:
        return self.upper_poles + tuple(p.conjugate() for p in self.upper_poles)

    def to_dict(self) -> dict:
        return {"domain": "halfplane", "poles": [complex_pair(p) for p in self.upper_poles]}


@dataclass(frozen=True)
class SegmentPoleConfig:
    """Finite poles off ``[-1, 1]``; infinity is always included.

    Conjugates are added automatically, so ``finite_poles`` is the full
    conjugation-closed set.
    """

    finite_poles: tuple[complex, ...] = ()
    include_infinity: bool = field(default=True, init=False)

    def __post_init__(self):
        poles: list[complex] = []
        for p in (as_complex(q) for q in self.finite_poles):
            if not (np.isfinite(p.real) and np.isfinite(p.imag)):
                raise ConfigError("segment poles must be finite")
            for q in (p, p.conjugate()):
                if all(abs(q - e) > 1e-14 * max(1.0, abs(q)) for e in poles):
                    poles.append(q)
        for p in poles:
            if segment_distance(p) < CONTOUR_GUARD:
                raise ConfigError(f"pole {p!r} is closer than 1e-6 to [-1, 1]")
        scale = max([1.0] + [abs(p) for p in poles])
        _distinct(poles, POLE_SEPARATION * scale, "segment poles")
        object.__setattr__(self, "finite_poles", tuple(poles))

    @property
    def scale(self) -> float:
        return max([1.0] + [abs(p) for p in self.finite_poles])

    def to_dict(self) -> dict:
        return {"domain": "segment", "poles": [complex_pair(p) for p in self.finite_poles]}


def segment_distance(w: complex) -> float:
    x = min(max(w.real, -1.0), 1.0)
    return abs(w - x)


def config_from_dict(data: dict):
    """Parse the config JSON object into one of the three config types."""
    try:
        domain = data["domain"]
        poles = [as_complex(p) for p in data.get("poles", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    if domain == "circle":
        if "radius" not in data:
            raise ConfigError("circle config needs a radius")
        return CirclePoleConfig.with_origin(float(data["radius"]), poles)
    if domain == "halfplane":
        return HalfPlanePoleConfig(tuple(poles))
    if domain == "segment":
        return SegmentPoleConfig(tuple(poles))
    raise ConfigError(f"unknown domain {domain!r}")


# --------------------------------------------------------------------------
# Joukowski pullback
# --------------------------------------------------------------------------


def joukowski(v):
    return 0.5 * (v + 1.0 / v)


def inverse_joukowski_inner(w: complex) -> complex:
    """The preimage of ``w`` under the Joukowski map lying inside the unit disk."""
    w = complex(w)
    root = np.sqrt(w * w - 1.0)
    big = w + root if abs(w + root) >= abs(w - root) else w - root
    v = 1.0 / big
    if abs(abs(v) - 1.0) < BRANCH_TOL:
        raise BranchAmbiguity(f"preimage of {w!r} lies on the unit circle")
    return complex(v)


def segment_pullback(cfg: SegmentPoleConfig) -> CirclePoleConfig:
    """Disk configuration whose Joukowski image is the segment pole set."""
    inner = [0j]
    for w in cfg.finite_poles:
        v = inverse_joukowski_inner(w)
        if all(abs(v - e) > 1e-13 for e in inner):
            inner.append(v)
    return CirclePoleConfig(1.0, tuple(inner))


# --------------------------------------------------------------------------
# node sets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NodeSet:
    """Solutions of ``B**s = exp(i phi)`` in ascending contour parameter."""

    domain: str
    s: int
    phi: float
    nodes: np.ndarray
    params: np.ndarray
    weights_mu: np.ndarray
    residuals: np.ndarray

    def __len__(self):
        return len(self.nodes)

    def to_dict(self) -> dict:
        return {
            "domain": self.domain,
            "s": self.s,
            "phi": self.phi,
            "nodes": [complex_pair(z) for z in self.nodes],
            "mu": [float(m) for m in self.weights_mu],
            "residuals": [float(e) for e in self.residuals],
        }


def _newton_monotone(g, dg, lo_bound, hi_bound, g_hi, targets, grid_size):
    """Solve g(t) = target for increasing g on [lo_bound, hi_bound].

    ``g(lo_bound) == 0`` and ``g(hi_bound) == g_hi``.  Brackets come from a
    uniform pre-grid; iterates leaving the bracket fall back to bisection.
    """
    targets = np.asarray(targets, dtype=float)
    grid = np.linspace(lo_bound, hi_bound, grid_size + 1)
    gv = g(grid)
    gv[0], gv[-1] = 0.0, g_hi
    gv = np.maximum.accumulate(gv)
    idx = np.clip(np.searchsorted(gv, targets, side="right") - 1, 0, grid_size - 1)
    lo = grid[idx].copy()
    hi = grid[idx + 1].copy()
    span = gv[idx + 1] - gv[idx]
    frac = np.where(span > 0, (targets - gv[idx]) / np.where(span > 0, span, 1.0), 0.5)
    t = lo + np.clip(frac, 0.0, 1.0) * (hi - lo)
    tol = np.maximum(PHASE_TOL, 4 * np.finfo(float).eps * np.abs(targets))

    f = g(t) - targets
    for _ in range(MAX_NEWTON):
        done = (np.abs(f) <= tol) | (hi - lo <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(t)))
        if done.all():
            break
        lo = np.where(f < 0, t, lo)
        hi = np.where(f > 0, t, hi)
        step = t - f / dg(t)
        inside = (step > lo) & (step < hi)
        step = np.where(inside, step, 0.5 * (lo + hi))
        t = np.where(done, t, step)
        f = np.where(done, f, g(t) - targets)
    return t, np.abs(f)


class _BlaschkeBase:
    """Shared node machinery; subclasses define the contour and the phase."""

    domain: str
    n: int
    param_bounds: tuple[float, float]

    def _raw_phase(self, t):
        raise NotImplementedError

    def _raw_dphase(self, t):
        raise NotImplementedError

    def _base_phase(self) -> float:
        raise NotImplementedError

    def _node_points(self, t):
        raise NotImplementedError

    def _phi_targets(self, s: int, phi: float) -> np.ndarray:
        theta0 = (phi - s * self._base_phase()) % TWO_PI
        if theta0 >= TWO_PI:
            theta0 = 0.0
        return theta0 + TWO_PI * np.arange(s * self.n)

    def _solve_params(self, s: int, targets):
        lo, hi = self.param_bounds
        grid = max(64, 8 * s * self.n)
        return _newton_monotone(
            lambda t: s * self._raw_phase(t),
            lambda t: s * self._raw_dphase(t),
            lo,
            hi,
            TWO_PI * s * self.n,
            targets,
            grid,
        )

    def solve_nodes(self, s: int, phi: float) -> NodeSet:
        """All ``s * n`` roots of ``B**s = exp(i phi)`` on the contour."""
        s = _check_s(s)
        phi = float(phi)
        targets = self._phi_targets(s, phi)
        t, _ = self._solve_params(s, targets)
        nodes = self._node_points(t)
        residuals = np.abs(self.blaschke(nodes) ** s - np.exp(1j * phi))
        worst = float(residuals.max())
        if not worst < RESIDUAL_TOL:
            raise NodeResidual(worst)
        return NodeSet(
            domain=self.domain,
            s=s,
            phi=phi % (TWO_PI * s * self.n),
            nodes=nodes,
            params=t,
            weights_mu=self.mu(nodes),
            residuals=residuals,
        )

    def node_trajectories(self, s: int, phis) -> np.ndarray:
        """Contour parameter of each labelled node for every phi.

        Node ``j`` is the root whose phase target is ``phi + 2 pi j``; as phi
        grows each label moves continuously along the contour.  Returns an
        array of shape ``(len(phis), s * n)``.
        """
        s = _check_s(s)
        phis = np.asarray(phis, dtype=float)
        span = TWO_PI * s * self.n
        j = np.arange(s * self.n)
        out = np.empty((len(phis), s * self.n))
        for i, phi in enumerate(phis):
            targets = (phi - s * self._base_phase() + TWO_PI * j) % span
            t, resid = self._solve_params(s, targets)
            if resid.max() > 1e3 * PHASE_TOL:
                raise NodeResidual(float(resid.max()))
            out[i] = t
        return out

    def blaschke(self, z):
        raise NotImplementedError

    def mu(self, point):
        raise NotImplementedError

    def __call__(self, z):
        return self.blaschke(z)


def _check_s(s) -> int:
    if int(s) != s or s < 1:
        raise ValueError(f"s must be a positive integer, got {s!r}")
    return int(s)


class CircleBlaschke(_BlaschkeBase):
    """B(z) = r**n prod (z - z_k) / (r**2 - z conj(z_k)) on ``|z| = r``."""

    def __init__(self, config: CirclePoleConfig, domain: str = "circle"):
        self.config = config
        self.domain = domain
        self.r = config.radius
        self.zk = np.asarray(config.inner_poles, dtype=complex)
        self.n = len(self.zk)
        self.param_bounds = (0.0, TWO_PI)
        self._ratio = self.zk / self.r
        self._raw0 = self._closed_phase(np.array([0.0]))[0]
        self._base = float(np.angle(self.blaschke(complex(self.r))))

    # values ---------------------------------------------------------------

    def blaschke(self, z):
        zz = np.asarray(z, dtype=complex)
        r2 = self.r**2
        out = np.full(zz.shape, self.r**self.n, dtype=complex)
        for zk in self.zk:
            den = r2 - zz * np.conj(zk)
            if zk != 0 and np.any(np.abs(den) < 1e-12 * abs(zk) * self.config.scale):
                raise PoleProximity(r2 / np.conj(zk))
            out = out * (zz - zk) / den
        return complex(out) if zz.ndim == 0 else out

    def mu(self, zeta, check: bool = True):
        """Positive weight sum_k (r^2 - |z_k|^2) / |zeta - z_k|^2."""
        zz = np.asarray(zeta, dtype=complex)
        if check and np.any(np.abs(np.abs(zz) - self.r) > ON_CONTOUR_TOL * self.r):
            raise OffContour(f"point not on |z| = {self.r}")
        out = np.zeros(zz.shape)
        r2 = self.r**2
        for zk in self.zk:
            out = out + (r2 - abs(zk) ** 2) / np.abs(zz - zk) ** 2
        return float(out) if zz.ndim == 0 else out

    def mu_logderiv(self, zeta):
        """zeta B'(zeta) / B(zeta); real and equal to ``mu`` on the contour."""
        zz = np.asarray(zeta, dtype=complex)
        out = np.zeros(zz.shape, dtype=complex)
        r2 = self.r**2
        for zk in self.zk:
            out = out + zz / (zz - zk) + zz * np.conj(zk) / (r2 - zz * np.conj(zk))
        return complex(out) if zz.ndim == 0 else out

    def contour(self, t):
        return self.r * np.exp(1j * np.asarray(t, dtype=float))

    def param(self, zeta):
        return np.mod(np.angle(zeta), TWO_PI)

    # phase ----------------------------------------------------------------

    def _closed_phase(self, t):
        t = np.asarray(t, dtype=float)
        e = np.exp(-1j * t)
        acc = self.n * t
        for c in self._ratio:
            acc = acc + 2.0 * np.angle(1.0 - c * e)
        return acc

    def _raw_phase(self, t):
        return self._closed_phase(t) - self._raw0

    def _raw_dphase(self, t):
        return self.mu(self.contour(t), check=False)

    def _base_phase(self) -> float:
        return self._base

    def phase(self, t):
        """Continuous arg B(r e^{it}); equals the principal value at t = 0."""
        t = np.asarray(t, dtype=float)
        out = self._base + self._raw_phase(t)
        return float(out) if t.ndim == 0 else out

    def dphase(self, t):
        return self.mu(self.contour(t), check=False)

    def _node_points(self, t):
        return self.contour(t)


class HalfPlaneBlaschke(_BlaschkeBase):
    """B_1(z) = prod (z - z_k) / (z - conj(z_k)) on the real axis.

    The node solver works in ``u`` with ``x = tan(u / 2)``, which maps
    ``(-pi, pi)`` onto the whole line.
    """

    def __init__(self, config: HalfPlanePoleConfig):
        self.config = config
        self.domain = "halfplane"
        self.zk = np.asarray(config.upper_poles, dtype=complex)
        self.n = len(self.zk)
        self.param_bounds = (-np.pi, np.pi)

    def blaschke(self, z):
        zz = np.asarray(z, dtype=complex)
        out = np.ones(zz.shape, dtype=complex)
        tol = 1e-12 * self.config.scale
        for zk in self.zk:
            den = zz - np.conj(zk)
            if np.any(np.abs(den) < tol):
                raise PoleProximity(np.conj(zk))
            out = out * (zz - zk) / den
        return complex(out) if zz.ndim == 0 else out

    def mu(self, x, check: bool = True):
        """sum_k Im z_k / |x - conj(z_k)|^2 on the real line."""
        xx = np.asarray(x)
        if np.iscomplexobj(xx):
            if check and np.any(np.abs(xx.imag) > ON_CONTOUR_TOL * self.config.scale):
                raise OffContour("point not on the real axis")
            xx = xx.real
        xx = xx.astype(float)
        out = np.zeros(xx.shape)
        for zk in self.zk:
            out = out + zk.imag / ((xx - zk.real) ** 2 + zk.imag**2)
        return float(out) if xx.ndim == 0 else out

    def mu_logderiv(self, x):
        """(1 / 2i) B_1'(x) / B_1(x)."""
        xx = np.asarray(x, dtype=complex)
        out = np.zeros(xx.shape, dtype=complex)
        for zk in self.zk:
            out = out + 1.0 / (xx - zk) - 1.0 / (xx - np.conj(zk))
        out = out / 2j
        return complex(out) if xx.ndim == 0 else out

    def _phase_x(self, x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros(x.shape)
        for zk in self.zk:
            acc = acc + (TWO_PI - 2.0 * np.arctan2(zk.imag, x - zk.real))
        return acc

    def phase(self, x):
        """Continuous arg B_1(x), normalised to 0 at x = -infinity."""
        x = np.asarray(x, dtype=float)
        out = self._phase_x(x)
        return float(out) if x.ndim == 0 else out

    def dphase(self, x):
        return 2.0 * self.mu(x)

    def contour(self, u):
        return np.tan(0.5 * np.asarray(u, dtype=float))

    def param(self, x):
        return 2.0 * np.arctan(np.asarray(x, dtype=float))

    def _raw_phase(self, u):
        return self._phase_x(self.contour(u))

    def _raw_dphase(self, u):
        x = self.contour(u)
        # d/du of the phase: 2 mu_1(x) dx/du with dx/du = (1 + x^2) / 2
        acc = np.zeros(x.shape)
        for zk in self.zk:
            acc = acc + zk.imag * (1.0 + x * x) / ((x - zk.real) ** 2 + zk.imag**2)
        return acc

    def _base_phase(self) -> float:
        return 0.0

    def _phi_targets(self, s: int, phi: float) -> np.ndarray:
        red = phi % TWO_PI
        if min(red, TWO_PI - red) < 1e-12:
            raise PhiAtInfinityNode("phi = 0 (mod 2 pi) puts a node at infinity on the real line")
        return red + TWO_PI * np.arange(s * self.n)

    def _node_points(self, u):
        return self.contour(u)

    def node_trajectories(self, s: int, phis) -> np.ndarray:
        for phi in np.asarray(phis, dtype=float):
            self._phi_targets(1, phi)
        return super().node_trajectories(s, phis)


BlaschkeSystem = _BlaschkeBase


def blaschke_system(config) -> _BlaschkeBase:
    """Build the Blaschke system matching a config object."""
    if isinstance(config, CirclePoleConfig):
        return CircleBlaschke(config)
    if isinstance(config, HalfPlanePoleConfig):
        return HalfPlaneBlaschke(config)
    if isinstance(config, SegmentPoleConfig):
        return CircleBlaschke(segment_pullback(config), domain="segment-pullback")
    raise TypeError(f"unsupported configuration {type(config).__name__}")


# free-function forms ---------------------------------------------------------


def blaschke_eval(sys: _BlaschkeBase, z):
    return sys.blaschke(z)


def mu_eval(sys: _BlaschkeBase, zeta):
    return sys.mu(zeta)


def phase(sys: _BlaschkeBase, t):
    return sys.phase(t)


def solve_nodes(sys: _BlaschkeBase, s: int, phi: float) -> NodeSet:
    return sys.solve_nodes(s, phi)


def sampled_phase(sys: _BlaschkeBase, params) -> np.ndarray:
    """arg B along a parameter grid, unwrapped from sampled principal values.

    Independent of the closed-form phase; the grid must be fine enough that
    the true phase moves by less than pi between samples.
    """
    params = np.asarray(params, dtype=float)
    values = sys.blaschke(sys.contour(params))
    return np.unwrap(np.angle(values))
