"""Rules that integrate admissible rational functions exactly.

Each builder returns a :class:`QuadratureRule` whose nodes are roots of
``B**k = exp(i phi)`` and whose weights are reciprocal values of the
matching weight function.  The ``apply``-style functions check that the
integrand belongs to the class on which the rule is exact and refuse it
otherwise.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .blaschke import (
    CircleBlaschke,
    CirclePoleConfig,
    HalfPlaneBlaschke,
    HalfPlanePoleConfig,
    SegmentPoleConfig,
    blaschke_system,
)
from .errors import ConfigError, NotAdmissible
from .oracle import integrate_real_line
from .rational import INFINITY, SimplePartialFraction, complex_pair

POLE_MATCH_TOL = 1e-9

RULE_KINDS = ("circle-integral", "circle-l2", "segment", "halfplane-l2")


@dataclass(frozen=True)
class QuadratureRule:
    domain: str
    s: int
    phi: float
    nodes: np.ndarray
    weights: np.ndarray
    provenance: str
    m: int = 1
    max_residual: float = 0.0

    def __len__(self):
        return len(self.nodes)

    def apply(self, values):
        return np.sum(self.weights * np.asarray(values))

    def to_dict(self) -> dict:
        return {
            "domain": self.domain,
            "s": self.s,
            "phi": self.phi,
            "nodes": [complex_pair(z) for z in self.nodes],
            "weights": [float(w) for w in self.weights],
            "provenance": self.provenance,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("node_re,node_im,weight\n")
        for z, w in zip(self.nodes, self.weights):
            z = complex(z)
            buf.write(f"{z.real:.17g},{z.imag:.17g},{w:.17g}\n")
        return buf.getvalue()


# --------------------------------------------------------------------------
# admissibility
# --------------------------------------------------------------------------


class Violation(NamedTuple):
    pole: object
    multiplicity: int
    limit: int
    reason: str = ""

    def __str__(self):
        extra = f" ({self.reason})" if self.reason else ""
        return f"pole {self.pole!r}: multiplicity {self.multiplicity} > {self.limit}{extra}"


@dataclass(frozen=True)
class Admissibility:
    verdict: bool
    violations: tuple[Violation, ...]

    def __bool__(self):
        return self.verdict


def _match(pole: complex, allowed, scale: float) -> bool:
    return any(abs(pole - a) <= POLE_MATCH_TOL * max(scale, abs(a)) for a in allowed)


def check_admissible(f, cfg, s: int, rule_kind: str) -> Admissibility:
    """Check the pole locations and multiplicities of ``f`` against a rule.

    ``rule_kind`` is one of ``circle-integral``, ``circle-l2``, ``segment``
    and ``halfplane-l2``.  ``f`` is anything with ``pole_profile()``.
    """
    if rule_kind not in RULE_KINDS:
        raise ValueError(f"unknown rule kind {rule_kind!r}")
    s = int(s)
    profile = f.pole_profile()
    mult0 = profile.get(0j, 0)
    mult_inf = profile.get(INFINITY, 0)
    finite = {p: k for p, k in profile.items() if p is not INFINITY and p != 0}
    violations: list[Violation] = []

    if rule_kind in ("circle-integral", "circle-l2"):
        if not isinstance(cfg, CirclePoleConfig):
            raise ConfigError("circle rules need a CirclePoleConfig")
        allowed = [p for p in cfg.inner_poles if p != 0]
        allowed += [p for p in cfg.reflected_poles if p is not INFINITY]
        scale = cfg.scale
    elif rule_kind == "segment":
        if not isinstance(cfg, SegmentPoleConfig):
            raise ConfigError("segment rules need a SegmentPoleConfig")
        allowed = list(cfg.finite_poles)
        scale = cfg.scale
        if mult0:
            violations.append(Violation(0j, mult0, 0, "pole on [-1, 1]"))
    else:
        if not isinstance(cfg, HalfPlanePoleConfig):
            raise ConfigError("half-plane rules need a HalfPlanePoleConfig")
        allowed = list(cfg.all_poles)
        scale = cfg.scale
        if mult0:
            violations.append(Violation(0j, mult0, 0, "pole on the real axis"))

    for pole, k in finite.items():
        if not _match(pole, allowed, scale):
            violations.append(Violation(pole, k, 0, "pole outside the configuration"))
        elif k > s:
            violations.append(Violation(pole, k, s))

    if rule_kind == "circle-integral":
        if mult0 > s - 1:
            violations.append(Violation(0j, mult0, s - 1))
        if mult_inf > s - 1:
            violations.append(Violation(INFINITY, mult_inf, s - 1))
    elif rule_kind == "circle-l2":
        if mult0 + mult_inf > 2 * s - 1:
            violations.append(
                Violation((0j, INFINITY), mult0 + mult_inf, 2 * s - 1, "combined 0 and infinity")
            )
    elif rule_kind == "segment":
        if mult_inf > s - 1:
            violations.append(Violation(INFINITY, mult_inf, s - 1))
    else:
        proper = f.is_proper() if hasattr(f, "is_proper") else mult_inf == 0
        if not proper:
            violations.append(Violation(INFINITY, mult_inf, 0, "not a proper fraction"))

    return Admissibility(not violations, tuple(violations))


def _require(f, cfg, s, kind):
    adm = check_admissible(f, cfg, s, kind)
    if not adm:
        raise NotAdmissible(adm)


# --------------------------------------------------------------------------
# rule builders
# --------------------------------------------------------------------------


def _circle_rule(cfg: CirclePoleConfig, k: int, phi: float, scale: float, prov: str, s, m=1):
    sys = CircleBlaschke(cfg)
    ns = sys.solve_nodes(k, phi)
    return QuadratureRule(
        domain="circle",
        s=s,
        phi=float(phi),
        nodes=ns.nodes,
        weights=scale / ns.weights_mu,
        provenance=prov,
        m=m,
        max_residual=float(ns.residuals.max()),
    )


def circle_integral_rule(cfg: CirclePoleConfig, s: int, phi: float = 0.0) -> QuadratureRule:
    """Nodes of B^s = e^{i phi}; weights 2 pi r / (s mu)."""
    return _circle_rule(cfg, s, phi, 2 * np.pi * cfg.radius / s, "eq3", s)


def circle_l2_rule(cfg: CirclePoleConfig, s: int, phi: float = 0.0) -> QuadratureRule:
    """Nodes of B^{2s} = e^{i phi}; weights pi r / (s mu)."""
    return _circle_rule(cfg, 2 * s, phi, np.pi * cfg.radius / s, "eq4", s)


def circle_l2m_rule(cfg: CirclePoleConfig, s: int, m: int, phi: float = 0.0) -> QuadratureRule:
    return _circle_rule(cfg, 2 * m * s, phi, np.pi * cfg.radius / (m * s), "eq6", s, m)


def _segment_rule(cfg: SegmentPoleConfig, k: int, phi: float, scale: float, prov: str, s):
    sys = blaschke_system(cfg)
    ns = sys.solve_nodes(k, phi)
    return QuadratureRule(
        domain="segment",
        s=s,
        phi=float(phi),
        nodes=np.cos(ns.params),
        weights=scale / ns.weights_mu,
        provenance=prov,
        max_residual=float(ns.residuals.max()),
    )


def segment_integral_rule(cfg: SegmentPoleConfig, s: int, phi: float = 0.0) -> QuadratureRule:
    """Chebyshev-weighted rule on [-1, 1]: one abscissa per circle node."""
    return _segment_rule(cfg, s, phi, np.pi / s, "eq7", s)


def segment_l2_rule(cfg: SegmentPoleConfig, s: int, phi: float = 0.0) -> QuadratureRule:
    return _segment_rule(cfg, 2 * s, phi, np.pi / (2 * s), "eq8", s)


def halfplane_l2_rule(cfg: HalfPlanePoleConfig, s: int, phi: float = np.pi) -> QuadratureRule:
    """Real nodes of B_1^{2s} = e^{i phi}; weights pi / (2 s mu_1)."""
    sys = HalfPlaneBlaschke(cfg)
    ns = sys.solve_nodes(2 * s, phi)
    return QuadratureRule(
        domain="halfplane",
        s=s,
        phi=float(phi),
        nodes=ns.nodes,
        weights=np.pi / (2 * s) / ns.weights_mu,
        provenance="eq10",
        max_residual=float(ns.residuals.max()),
    )


def spf_rule(p: SimplePartialFraction, phi: float = np.pi) -> QuadratureRule:
    """Nodes of B_1^2 = e^{i phi} for the poles of ``p``; weights pi / mu_1."""
    sys = HalfPlaneBlaschke(HalfPlanePoleConfig(p.poles))
    ns = sys.solve_nodes(2, phi)
    return QuadratureRule(
        domain="halfplane",
        s=1,
        phi=float(phi),
        nodes=ns.nodes,
        weights=np.pi / ns.weights_mu,
        provenance="eq16",
        max_residual=float(ns.residuals.max()),
    )


# --------------------------------------------------------------------------
# applying the rules
# --------------------------------------------------------------------------


def _abs2(v):
    v = np.asarray(v)
    return (v * np.conj(v)).real


def circle_integral(f, cfg: CirclePoleConfig, s: int, phi: float = 0.0) -> complex:
    """Arc-length integral of ``f`` over ``|z| = r``."""
    _require(f, cfg, s, "circle-integral")
    rule = circle_integral_rule(cfg, s, phi)
    return complex(rule.apply(f(rule.nodes)))


def circle_l2(f, cfg: CirclePoleConfig, s: int, phi: float = 0.0) -> float:
    """Squared L2 norm of ``f`` on ``|z| = r``."""
    _require(f, cfg, s, "circle-l2")
    rule = circle_l2_rule(cfg, s, phi)
    return float(rule.apply(_abs2(f(rule.nodes))))


def circle_l2m(f, cfg: CirclePoleConfig, s: int, m: int, phi: float = 0.0) -> float:
    """``||f||_{2m}^{2m}`` on ``|z| = r``, exact for the same class as ``circle_l2``."""
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    _require(f, cfg, s, "circle-l2")
    rule = circle_l2m_rule(cfg, s, int(m), phi)
    return float(rule.apply(_abs2(f(rule.nodes)) ** int(m)))


def segment_integral(f, cfg: SegmentPoleConfig, s: int, phi: float = 0.0) -> complex:
    """Integral of ``f(x) / sqrt(1 - x^2)`` over [-1, 1]."""
    _require(f, cfg, s, "segment")
    rule = segment_integral_rule(cfg, s, phi)
    return complex(rule.apply(f(rule.nodes.astype(complex))))


def segment_l2(f, cfg: SegmentPoleConfig, s: int, phi: float = 0.0) -> float:
    """Integral of ``|f(x)|^2 / sqrt(1 - x^2)`` over [-1, 1]."""
    _require(f, cfg, s, "segment")
    rule = segment_l2_rule(cfg, s, phi)
    return float(rule.apply(_abs2(f(rule.nodes.astype(complex)))))


def halfplane_l2(f, cfg: HalfPlanePoleConfig, s: int, phi: float = np.pi) -> float:
    """Squared L2 norm of a proper fraction ``f`` on the real line."""
    _require(f, cfg, s, "halfplane-l2")
    rule = halfplane_l2_rule(cfg, s, phi)
    return float(rule.apply(_abs2(f(rule.nodes.astype(complex)))))


@dataclass(frozen=True)
class SPFIdentities:
    norm_sq: float
    via_re: float
    via_mu: float
    mu_im_gap: float

    def spread(self) -> float:
        vals = (self.norm_sq, self.via_re, self.via_mu)
        return (max(vals) - min(vals)) / abs(self.norm_sq)


def spf_l2_identities(p: SimplePartialFraction, phi: float = np.pi) -> SPFIdentities:
    """Squared L2 norm of a simple partial fraction on the real line, three ways.

    ``norm_sq`` comes from the reference integrator; ``via_re`` and
    ``via_mu`` are the two node sums.  ``mu_im_gap`` is the largest
    ``|mu_1(x_k) - Im rho(x_k)|`` over the nodes.
    """
    if min(z.imag for z in p.poles) <= 0:
        raise ConfigError("simple partial fraction poles must lie in the upper half-plane")
    rule = spf_rule(p, phi)
    x = rule.nodes
    rho = p(x.astype(complex))
    mu1 = np.pi / rule.weights
    via_re = float(rule.apply(rho.real**2))
    via_mu = float(np.pi * mu1.sum())
    oracle = integrate_real_line(lambda t: _abs2(p(t.astype(complex))))
    gap = float(np.max(np.abs(mu1 - rho.imag)))
    return SPFIdentities(float(oracle.value), via_re, via_mu, gap)
