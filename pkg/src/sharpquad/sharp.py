"""Closed-form norms, extremal functions and different-metric inequalities.

Every ``check_*`` function returns :class:`InequalityReport` objects with
both sides evaluated independently: sup-norms by dense sampling plus local
refinement, integral norms either by an exact rule or by the reference
integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .blaschke import CircleBlaschke, CirclePoleConfig, HalfPlaneBlaschke, HalfPlanePoleConfig
from .chebyshev import chebyshev_u, chebyshev_u_coefficients
from .errors import ConfigError, NotAdmissible
from .oracle import lp_norm
from .quadrature import Admissibility, Violation, check_admissible, circle_l2, halfplane_l2
from .rational import INFINITY, RationalFunction, SimplePartialFraction, Term

TWO_PI = 2 * np.pi
HOLD_TOL = 1e-9


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    params: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs

    def holds(self, rel: float = HOLD_TOL) -> bool:
        return self.slack >= -rel * max(abs(self.lhs), abs(self.rhs))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "ratio": self.ratio,
            "params": dict(self.params),
        }


# --------------------------------------------------------------------------
# sup-norms
# --------------------------------------------------------------------------


def sample_max(h, a: float, b: float, grid_size: int, periodic: bool = True, refine: int = 3):
    """Maximum of a real vectorised ``h`` on ``[a, b]``.

    Dense uniform sampling, then bounded Brent refinement on one grid cell
    either side of the ``refine`` largest local maxima.  Returns
    ``(value, location)``; the value is a lower bound on the true max.
    """
    if periodic:
        grid = a + (b - a) * np.arange(grid_size) / grid_size
    else:
        grid = np.linspace(a, b, grid_size + 1)
    vals = np.asarray(h(grid), dtype=float)
    if periodic:
        left, right = np.roll(vals, 1), np.roll(vals, -1)
    else:
        left = np.concatenate([[-np.inf], vals[:-1]])
        right = np.concatenate([vals[1:], [-np.inf]])
    peaks = np.flatnonzero((vals >= left) & (vals >= right))
    if len(peaks) == 0:
        peaks = np.array([int(np.argmax(vals))])
    peaks = peaks[np.argsort(vals[peaks])[::-1][:refine]]

    best_val = float(vals.max())
    best_loc = float(grid[int(np.argmax(vals))])
    step = grid[1] - grid[0]
    for i in peaks:
        lo, hi = grid[i] - step, grid[i] + step
        if not periodic:
            lo, hi = max(lo, a), min(hi, b)
        res = minimize_scalar(
            lambda t: -float(np.asarray(h(np.array([t])))[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-13 * max(1.0, abs(b - a))},
        )
        if -res.fun > best_val:
            best_val, best_loc = float(-res.fun), float(res.x)
    return best_val, best_loc


def circle_sup(h, r: float, grid_size: int = 4096):
    """max over ``|z| = r`` of a real function of the point."""
    return sample_max(lambda t: h(r * np.exp(1j * t)), 0.0, TWO_PI, grid_size)


def line_sup(h, grid_size: int = 8192):
    """max over the real line, sampled through ``x = tan(u / 2)``."""
    return sample_max(lambda u: h(np.tan(0.5 * u)), -np.pi, np.pi, grid_size)


def _circle_grid(s: int, n: int) -> int:
    return max(4096, 64 * s * n)


# --------------------------------------------------------------------------
# weight functions as rational functions, closed norms
# --------------------------------------------------------------------------


def mu_rational(cfg: CirclePoleConfig) -> RationalFunction:
    """mu(z) = z B'(z)/B(z) in partial fractions: simple poles on Z and Z*."""
    r2 = cfg.radius**2
    terms = []
    for zk in cfg.inner_poles[1:]:
        terms.append(Term(zk, 1, zk))
        terms.append(Term(r2 / zk.conjugate(), 1, -r2 / zk.conjugate()))
    return RationalFunction(tuple(terms), poly=(1.0,))


def mu1_rational(cfg: HalfPlanePoleConfig) -> RationalFunction:
    """mu_1(z) = (1/2i) B_1'(z)/B_1(z): a proper fraction with simple poles."""
    terms = []
    for zk in cfg.upper_poles:
        terms.append(Term(zk, 1, 1 / 2j))
        terms.append(Term(zk.conjugate(), 1, -1 / 2j))
    return RationalFunction(tuple(terms))


def mu_l2_closed(cfg: CirclePoleConfig) -> float:
    """Squared L2 norm of mu on ``|z| = r`` from the residue double sum."""
    r = cfg.radius
    z = np.asarray(cfg.inner_poles[1:], dtype=complex)
    w = z[:, None] * np.conj(z)[None, :]
    total = cfg.n**2 + 2 * np.sum(w / (r * r - w))
    value = TWO_PI * r * total
    if abs(value.imag) > 1e-10 * abs(value.real):
        raise ArithmeticError("double sum has a non-negligible imaginary part")
    return float(value.real)


def spf_l2_closed(p: SimplePartialFraction) -> float:
    """Squared L2 norm of a simple partial fraction on the real line."""
    z = np.asarray(p.poles, dtype=complex)
    if np.any(z.imag <= 0):
        raise ConfigError("poles must lie in the open upper half-plane")
    dx = z.real[:, None] - z.real[None, :]
    sy = z.imag[:, None] + z.imag[None, :]
    return float(TWO_PI * np.sum(sy / (dx * dx + sy * sy)))


# --------------------------------------------------------------------------
# extremal functions
# --------------------------------------------------------------------------


def _log1p(u):
    """Accurate complex log(1 + u) for small u (numpy's complex log1p is not)."""
    re = 0.5 * np.log1p(2 * u.real + u.real**2 + u.imag**2)
    im = np.arctan2(u.imag, 1 + u.real)
    return re + 1j * im


class ExtremalCircle:
    """R(z) = (B^s(z) - e^{i phi} B^{-s}(z)) / (z - zeta_1) on ``|z| = r``.

    ``zeta_1`` is the first node of ``B^{2s} = e^{i phi}``.  Evaluated as
    ``2 B(zeta_1)^s sinh(s L) / (z - zeta_1)`` with ``L = log(B(z)/B(zeta_1))``
    accumulated factor by factor, which keeps full relative accuracy near
    ``zeta_1`` where the defining quotient is 0/0.
    """

    def __init__(self, cfg: CirclePoleConfig, s: int, phi: float = 0.0):
        self.cfg = cfg
        self.s = int(s)
        self.phi = float(phi)
        self.system = CircleBlaschke(cfg)
        self.node_set = self.system.solve_nodes(2 * self.s, self.phi)
        self.zeta1 = complex(self.node_set.nodes[0])
        z = np.asarray(cfg.inner_poles, dtype=complex)
        r2 = cfg.radius**2
        self._a = 1.0 / (self.zeta1 - z)
        self._c = np.conj(z) / (r2 - self.zeta1 * np.conj(z))
        self._bs = complex(self.system.blaschke(self.zeta1)) ** self.s
        self._at_zeta1 = 2 * self.s * self._bs * self.system.mu(self.zeta1) / self.zeta1

    def __call__(self, z):
        zz = np.asarray(z, dtype=complex)
        w = np.atleast_1d(zz - self.zeta1)
        logs = np.zeros(w.shape, dtype=complex)
        for a, c in zip(self._a, self._c):
            logs = logs + _log1p(w * a) - _log1p(-w * c)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 2 * self._bs * np.sinh(self.s * logs) / w
        out = np.where(w == 0, self._at_zeta1, out)
        return complex(out[0]) if zz.ndim == 0 else out.reshape(zz.shape)

    def pole_profile(self) -> dict:
        profile: dict = {0j: self.s}
        if self.s > 1:
            profile[INFINITY] = self.s - 1
        for zk, zs in zip(self.cfg.inner_poles[1:], self.cfg.reflected_poles[1:]):
            profile[zk] = self.s
            profile[zs] = self.s
        return profile

    def is_proper(self) -> bool:
        return False


def extremal_circle(cfg: CirclePoleConfig, s: int, phi: float = 0.0) -> ExtremalCircle:
    return ExtremalCircle(cfg, s, phi)


def t_star(s: int):
    """Coefficients and lowest power of 1 + 2 sum cos(kt) + e^{ist}."""
    return np.ones(2 * s), 1 - s


def p_star(s: int, r: float) -> np.ndarray:
    """Ascending coefficients of (z^{2s} - r^{2s}) / (z - r)."""
    return np.array([r ** (2 * s - 1 - k) for k in range(2 * s)], dtype=float)


# --------------------------------------------------------------------------
# circle inequalities
# --------------------------------------------------------------------------


def _require(f, cfg, s, kind):
    adm = check_admissible(f, cfg, s, kind)
    if not adm:
        raise NotAdmissible(adm)


def check_eq11(f, cfg: CirclePoleConfig, s: int, grid_size: int | None = None, phi: float = 0.0):
    """|f|^2 / mu <= (s / pi r) ||f||_2^2 on ``|z| = r``."""
    _require(f, cfg, s, "circle-l2")
    sys = CircleBlaschke(cfg)
    grid = grid_size or _circle_grid(s, cfg.n)

    def h(z):
        v = f(z)
        return (v * np.conj(v)).real / sys.mu(z, check=False)

    lhs, loc = circle_sup(h, cfg.radius, grid)
    rhs = s / (np.pi * cfg.radius) * circle_l2(f, cfg, s, phi)
    return InequalityReport("eq11", lhs, rhs, {"s": s, "n": cfg.n, "r": cfg.radius, "argmax": loc})


def check_eq13_eq27(f, cfg: CirclePoleConfig, s: int, phi: float = 0.0):
    """Sup-norm bounds through ||mu||_2; returns ``(eq13, eq27)``."""
    _require(f, cfg, s, "circle-l2")
    sys = CircleBlaschke(cfg)
    grid = _circle_grid(s, cfg.n)
    r = cfg.radius
    mu_sq = mu_l2_closed(cfg)

    sup_f, _ = circle_sup(lambda z: np.abs(f(z)), r, grid)
    rhs13 = s / (np.pi * r) * math.sqrt(circle_l2(f, cfg, s, phi)) * math.sqrt(mu_sq)
    sup_mu, _ = circle_sup(lambda z: sys.mu(z, check=False), r, grid)
    params = {"s": s, "n": cfg.n, "r": r}
    return (
        InequalityReport("eq13", sup_f, rhs13, params),
        InequalityReport("eq27", sup_mu, mu_sq / (np.pi * r), {"n": cfg.n, "r": r}),
    )


def eq27_tightness_probe(r: float = 1.0, fractions=(0.97, 0.99, 0.997), others=()):
    """Ratio of the two sides of the mu sup bound as one pole approaches the circle."""
    ratios = []
    for frac in fractions:
        cfg = CirclePoleConfig.with_origin(r, [frac * r, *others])
        sys = CircleBlaschke(cfg)
        sup_mu, _ = circle_sup(lambda z: sys.mu(z, check=False), r, _circle_grid(1, cfg.n))
        ratios.append(sup_mu / (mu_l2_closed(cfg) / (np.pi * r)))
    return ratios


def eq12_best_ratio(cfg: CirclePoleConfig, s: int, steps: int = 64) -> tuple[float, float]:
    """Search phi for the extremal function closest to equality in the
    sup-norm version of the pointwise bound.

    Returns ``(best ratio, phi)``, ratio = ||R||_inf^2 / ((s / pi r) ||R||_2^2 ||mu||_inf).
    """
    r = cfg.radius
    sys = CircleBlaschke(cfg)
    sup_mu, _ = circle_sup(lambda z: sys.mu(z, check=False), r, _circle_grid(s, cfg.n))
    best = (-np.inf, 0.0)
    for phi in TWO_PI * np.arange(steps) / steps:
        R = ExtremalCircle(cfg, s, phi)
        sup_r, _ = circle_sup(lambda z: np.abs(R(z)) ** 2, r, _circle_grid(s, cfg.n))
        ratio = sup_r / (s / (np.pi * r) * circle_l2(R, cfg, s, phi) * sup_mu)
        if ratio > best[0]:
            best = (ratio, phi)
    return best


# --------------------------------------------------------------------------
# trigonometric and algebraic polynomials
# --------------------------------------------------------------------------


def _m_of_p(p: float) -> int:
    if not p > 0:
        raise ValueError(f"p must be positive, got {p!r}")
    return max(1, math.ceil(p / 2 - 1e-12))


def _trig_eval(coeffs, low):
    coeffs = np.asarray(coeffs, dtype=complex)
    powers = low + np.arange(len(coeffs))

    def T(t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * np.multiply.outer(t, powers)) @ coeffs

    return T


def trig_class_s(low: int, high: int) -> int:
    """Smallest s whose class holds powers low..high: either 1-s..s or -s..s-1."""
    return max(1, min(max(1 - low, high), max(-low, high + 1)))


def check_trig_eq28(coeffs, p: float, low: int, s: int | None = None, grid_size: int = 8192):
    """sup |T| <= (m/pi)^{1/p} s^{1/p} ||T||_{L_p[0, 2pi]}, T = sum c_k e^{i(low+k)t}."""
    high = low + len(coeffs) - 1
    s_min = trig_class_s(low, high)
    if s is None:
        s = s_min
    elif s < s_min:
        raise ValueError(f"powers {low}..{high} do not fit the class for s={s}")
    m = _m_of_p(p)
    T = _trig_eval(coeffs, low)
    lhs, _ = sample_max(lambda t: np.abs(T(t)), 0.0, TWO_PI, grid_size)
    norm = lp_norm(T, "trig", p).value
    rhs = (m / np.pi) ** (1 / p) * s ** (1 / p) * norm
    return InequalityReport("eq28", lhs, rhs, {"s": s, "p": p, "m": m})


def check_poly_eq29(coeffs, r: float, p: float, s: int | None = None, grid_size: int = 8192):
    """sup_{|z|=r} |P| <= (m/(pi r))^{1/p} s^{1/p} ||P||_{L_p}, deg P <= 2s - 1."""
    P = RationalFunction.polynomial(coeffs)
    deg = max(len(P.poly) - 1, 0)
    s_min = max(1, math.ceil((deg + 1) / 2))
    if s is None:
        s = s_min
    elif s < s_min:
        raise ValueError(f"degree {deg} exceeds 2s - 1 for s={s}")
    m = _m_of_p(p)
    lhs, _ = circle_sup(lambda z: np.abs(P(z)), r, grid_size)
    norm = lp_norm(P, "circle", p, r=r).value
    rhs = (m / (np.pi * r)) ** (1 / p) * s ** (1 / p) * norm
    return InequalityReport("eq29", lhs, rhs, {"s": s, "p": p, "m": m, "r": r})


def check_eq30(coeffs, s: int, low: int | None = None, steps: int = 512):
    """max_phi |sum_k T(t_k(phi))| <= (s / 2 pi) ||T||_{L_1}, nodes of zeta^s = e^{i phi}."""
    if low is None:
        low = -(len(coeffs) // 2)
    high = low + len(coeffs) - 1
    if low < 1 - s or high > s - 1:
        raise ValueError(f"powers {low}..{high} exceed degree s-1 = {s - 1}")
    T = _trig_eval(coeffs, low)
    sys = CircleBlaschke(CirclePoleConfig(1.0, (0j,)))
    lhs = 0.0
    for phi in TWO_PI * np.arange(steps) / steps:
        t = sys.solve_nodes(s, phi).params
        lhs = max(lhs, abs(T(t).sum()))
    rhs = s / TWO_PI * lp_norm(T, "trig", 1.0).value
    return InequalityReport("eq30", lhs, rhs, {"s": s, "steps": steps})


def check_segment_eq31_eq32(coeffs, p: float, s: int | None = None, grid_size: int = 8192):
    """Bound on [-1, 1] for deg P <= s - 1, plus the U_{s-1} equality case.

    Returns ``(eq31, eq32)``; in ``eq32`` lhs is |U_{s-1}(1)| and rhs is
    sqrt(s / pi) times its Chebyshev-weighted L2 norm.
    """
    P = RationalFunction.polynomial(coeffs)
    deg = max(len(P.poly) - 1, 0)
    if s is None:
        s = deg + 1
    elif deg > s - 1:
        raise ValueError(f"degree {deg} exceeds s - 1 for s={s}")
    m = _m_of_p(p)
    lhs, _ = sample_max(lambda t: np.abs(P(np.cos(t).astype(complex))), 0.0, np.pi, grid_size,
                        periodic=False)
    norm = lp_norm(lambda x: P(np.asarray(x, dtype=complex)), "segment", p).value
    eq31 = InequalityReport(
        "eq31", lhs, (2 * m / np.pi) ** (1 / p) * s ** (1 / p) * norm, {"s": s, "p": p, "m": m}
    )
    eq32 = check_eq32(s)
    return eq31, eq32


def check_eq32(s: int) -> InequalityReport:
    at_one = abs(float(chebyshev_u(s - 1, 1.0)))
    norm = lp_norm(lambda x: chebyshev_u(s - 1, x), "segment", 2.0).value
    return InequalityReport("eq32", at_one, math.sqrt(s / np.pi) * norm, {"s": s})


def u_star_coefficients(s: int) -> np.ndarray:
    return chebyshev_u_coefficients(s - 1)


# --------------------------------------------------------------------------
# real line
# --------------------------------------------------------------------------


def check_halfplane_eq35(f, cfg: HalfPlanePoleConfig, s: int, phi: float = np.pi):
    """Sup-norm bounds on the real line.

    Returns three reports: the bound for ``f``, the bound for ``mu_1`` and
    the pointwise bound ``|f|^2 / mu_1 <= (2s/pi) ||f||^2``.
    """
    norm_sq = halfplane_l2(f, cfg, s, phi)
    mu1_sq = spf_l2_closed(SimplePartialFraction(cfg.upper_poles)) / 2
    sys = HalfPlaneBlaschke(cfg)

    sup_f, _ = line_sup(lambda x: np.abs(f(x.astype(complex))))
    sup_mu, _ = line_sup(lambda x: sys.mu(x))

    def ratio(x):
        v = f(x.astype(complex))
        return (v * np.conj(v)).real / sys.mu(x)

    sup_ratio, _ = line_sup(ratio)
    params = {"s": s, "n": cfg.n}
    return (
        InequalityReport("eq35", sup_f, 2 * s / np.pi * math.sqrt(norm_sq * mu1_sq),
                         {**params, "form": "R"}),
        InequalityReport("eq35", sup_mu, 2 / np.pi * mu1_sq, {**params, "form": "mu1"}),
        InequalityReport("eq35", sup_ratio, 2 * s / np.pi * norm_sq, {**params, "form": "pointwise"}),
    )


# --------------------------------------------------------------------------
# simple partial fractions on a circle
# --------------------------------------------------------------------------


def _check_tail(tail: RationalFunction, cfg: CirclePoleConfig, s: int) -> None:
    violations = list(check_admissible(tail, cfg, s, "circle-l2").violations)
    reflected = [p for p in cfg.reflected_poles if p is not INFINITY]
    for pole, k in tail.pole_profile().items():
        if pole is INFINITY or not any(abs(pole - q) <= 1e-9 * max(1.0, abs(q)) for q in reflected):
            violations.append(Violation(pole, k, 0, "tail pole off the reflected set"))
    if not tail.is_proper():
        violations.append(Violation(INFINITY, 0, 0, "tail must vanish at infinity"))
    if violations:
        raise NotAdmissible(Admissibility(False, tuple(violations)))


def check_spf_eq37_eq40_eq41(p: SimplePartialFraction, tail: RationalFunction | None,
                             r: float, s: int = 1):
    """Inequalities for rho = rho_n + tail on ``|z| = r``.

    ``p`` has poles strictly inside the circle; ``tail`` has poles only at
    their reflections, multiplicity <= s, and vanishes at infinity.
    Returns five reports: eq37, the two forms of eq40 and the two forms of
    eq41 (the latter computed for ``rho_n`` alone).
    """
    n = p.n
    cfg = CirclePoleConfig.with_origin(r, p.poles)
    rho_n = p.to_rational()
    tail = tail if tail is not None else RationalFunction()
    _check_tail(tail, cfg, s)
    rho = rho_n + tail
    grid = _circle_grid(s, cfg.n)

    eta, _ = circle_sup(lambda z: np.abs(rho(z)), r, grid)
    sup_n, _ = circle_sup(lambda z: np.abs(rho_n(z)), r, grid)
    rho_sq = circle_l2(rho, cfg, s)
    rho_n_sq = circle_l2(rho_n, cfg, 1)

    base = {"n": n, "r": r, "s": s, "eta": eta}
    log_eta = math.log1p(eta)
    eq37 = InequalityReport("eq37", sup_n, 3 * eta * math.log(r * eta + 1), base)
    eq40a = InequalityReport(
        "eq40", eta**2 / (6 * r * eta * log_eta - n + 1), s / (np.pi * r) * rho_sq,
        {**base, "form": "first"},
    )
    eq40b = InequalityReport(
        "eq40", eta / log_eta, 6 * s / np.pi * rho_sq, {**base, "form": "second"}
    )

    def pointwise(z):
        a = np.abs(rho_n(z))
        return a * a / (2 * r * a - (n - 1))

    lhs41, _ = circle_sup(pointwise, r, grid)
    eq41a = InequalityReport("eq41", lhs41, rho_n_sq / (np.pi * r), {**base, "form": "pointwise"})
    eq41b = InequalityReport("eq41", sup_n, 2 / np.pi * rho_n_sq, {**base, "form": "sup"})
    return eq37, eq40a, eq40b, eq41a, eq41b
