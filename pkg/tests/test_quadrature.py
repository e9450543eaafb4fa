"""Rule construction, admissibility and exactness."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpquad import sampling
from sharpquad.blaschke import CircleBlaschke, CirclePoleConfig, HalfPlaneBlaschke, HalfPlanePoleConfig, SegmentPoleConfig
from sharpquad.chebyshev import chebyshev_u_coefficients
from sharpquad.errors import ConfigError, NotAdmissible, PhiAtInfinityNode
from sharpquad.oracle import integrate_circle, integrate_real_line, integrate_segment_weighted
from sharpquad.quadrature import (
    check_admissible,
    circle_integral,
    circle_integral_rule,
    circle_l2,
    circle_l2_rule,
    circle_l2m,
    circle_l2m_rule,
    halfplane_l2,
    halfplane_l2_rule,
    segment_integral,
    segment_integral_rule,
    segment_l2,
    spf_l2_identities,
    spf_rule,
)
from sharpquad.rational import INFINITY, RationalFunction, SimplePartialFraction, Term
from sharpquad.sharp import mu1_rational, mu_l2_closed, mu_rational

PI = np.pi
TWO_PI = 2 * np.pi
seeds = st.integers(0, 2**32 - 1)
ONE = RationalFunction.constant(1.0)


def _abs2(v):
    return (v * np.conj(v)).real


def rel(a, b):
    return abs(a - b) / abs(b)


# --------------------------------------------------------------------------
# admissibility
# --------------------------------------------------------------------------


def test_admissible_simple_pole():
    cfg = CirclePoleConfig.with_origin(1.0, [0.5j])
    assert check_admissible(RationalFunction.pole_term(0.5j), cfg, 1, "circle-integral")


def test_power_too_high_for_l2():
    cfg = CirclePoleConfig.with_origin(1.0, [])
    s = 2
    adm = check_admissible(RationalFunction.polynomial([0] * (2 * s) + [1]), cfg, s, "circle-l2")
    assert not adm
    assert adm.violations[0].multiplicity == 2 * s
    assert check_admissible(RationalFunction.polynomial([0] * (2 * s - 1) + [1]), cfg, s, "circle-l2")


def test_halfplane_order_too_high():
    cfg = HalfPlanePoleConfig((1j,))
    assert not check_admissible(RationalFunction.pole_term(1j, 4), cfg, 3, "halfplane-l2")
    assert check_admissible(RationalFunction.pole_term(1j, 3), cfg, 3, "halfplane-l2")
    assert check_admissible(RationalFunction.pole_term(-1j, 3), cfg, 3, "halfplane-l2")


def test_halfplane_requires_proper():
    cfg = HalfPlanePoleConfig((1j,))
    f = RationalFunction((Term(1j, 1, 1.0),), poly=(1.0,))
    adm = check_admissible(f, cfg, 1, "halfplane-l2")
    assert not adm
    assert adm.violations[0].pole is INFINITY


def test_foreign_pole_rejected():
    cfg = CirclePoleConfig.with_origin(1.0, [0.5])
    adm = check_admissible(RationalFunction.pole_term(0.3), cfg, 3, "circle-integral")
    assert not adm and "outside" in str(adm.violations[0])


def test_reflected_pole_accepted():
    cfg = CirclePoleConfig.with_origin(2.0, [1.0])
    assert check_admissible(RationalFunction.pole_term(4.0), cfg, 1, "circle-integral")


def test_integral_limits_at_zero_and_infinity():
    cfg = CirclePoleConfig.with_origin(1.0, [])
    assert check_admissible(RationalFunction.laurent([1, 1, 1], -1), cfg, 2, "circle-integral")
    assert not check_admissible(RationalFunction.laurent([1, 1, 1, 1], -1), cfg, 2, "circle-integral")
    assert not check_admissible(RationalFunction.laurent([1, 1, 1], -2), cfg, 2, "circle-integral")


def test_segment_limits():
    cfg = SegmentPoleConfig((2.0,))
    assert check_admissible(RationalFunction.polynomial([1, 1]), cfg, 2, "segment")
    assert not check_admissible(RationalFunction.polynomial([1, 1, 1]), cfg, 2, "segment")
    assert not check_admissible(RationalFunction.laurent([1, 1], -1), cfg, 2, "segment")


def test_wrong_config_type():
    with pytest.raises(ConfigError):
        check_admissible(ONE, SegmentPoleConfig(()), 1, "circle-l2")
    with pytest.raises(ValueError):
        check_admissible(ONE, SegmentPoleConfig(()), 1, "sphere")


def test_rules_refuse_inadmissible_input():
    cfg = CirclePoleConfig.with_origin(1.0, [0.5])
    with pytest.raises(NotAdmissible) as info:
        circle_integral(RationalFunction.pole_term(0.5, 2), cfg, 1)
    assert info.value.admissibility.violations


# --------------------------------------------------------------------------
# circle rules
# --------------------------------------------------------------------------


@pytest.mark.parametrize("r", sampling.RADII)
def test_constant(r):
    cfg = CirclePoleConfig.with_origin(r, [0.3 * r, -0.2j * r])
    assert circle_integral(ONE, cfg, 2, 0.4) == pytest.approx(TWO_PI * r, rel=1e-13)
    assert circle_l2(ONE, cfg, 2, 0.4) == pytest.approx(TWO_PI * r, rel=1e-13)
    for m in (1, 2, 3):
        assert circle_l2m(ONE, cfg, 1, m, 0.4) == pytest.approx(TWO_PI * r, rel=1e-13)


def test_reflected_pole_integral():
    r, z2, beta = 2.0, 0.6 + 0.8j, 1.5 - 0.5j
    cfg = CirclePoleConfig.with_origin(r, [z2])
    # beta / (r^2 - z conj(z2)) as a single pole at the reflected point
    f = RationalFunction.pole_term(r * r / np.conj(z2), 1, -beta / np.conj(z2))
    assert circle_integral(f, cfg, 1, 1.1) == pytest.approx(TWO_PI * beta / r, rel=1e-12)


def test_inner_pole_integral_vanishes():
    cfg = CirclePoleConfig.with_origin(1.0, [0.4 - 0.3j])
    assert abs(circle_integral(RationalFunction.pole_term(0.4 - 0.3j), cfg, 1, 2.0)) < 1e-13


@pytest.mark.parametrize("r, z2", [(1.0, 0.5), (2.0, 1 + 0.5j), (0.5, -0.3j)])
def test_resolvent_l2(r, z2):
    cfg = CirclePoleConfig.with_origin(r, [z2])
    expected = TWO_PI * r / (r * r - abs(z2) ** 2)
    assert circle_l2(RationalFunction.pole_term(z2), cfg, 1, 0.3) == pytest.approx(expected, rel=1e-12)


def test_l2m_example():
    cfg = CirclePoleConfig.with_origin(1.0, [0.5])
    f = RationalFunction.pole_term(0.5)
    oracle = integrate_circle(lambda z: np.abs(z - 0.5) ** -4, 1.0).value
    assert rel(circle_l2m(f, cfg, 1, 2, 0.7), oracle) < 1e-12


def test_l2m_m1_reduces_to_l2():
    cfg = CirclePoleConfig.with_origin(1.0, [0.5, 0.2 + 0.6j])
    a, b = circle_l2_rule(cfg, 2, 0.9), circle_l2m_rule(cfg, 2, 1, 0.9)
    assert np.array_equal(a.nodes, b.nodes)
    assert np.array_equal(a.weights, b.weights)
    f = RationalFunction.pole_term(0.5, 2)
    assert circle_l2m(f, cfg, 2, 1, 0.9) == circle_l2(f, cfg, 2, 0.9)


def test_mu_norm_self_consistency():
    cfg = CirclePoleConfig.with_origin(1.0, [0.5])
    assert mu_l2_closed(cfg) == pytest.approx(28 * PI / 3, rel=1e-14)
    for phi in (0.0, 1.0, 4.0):
        ns = CircleBlaschke(cfg).solve_nodes(2, phi)
        assert PI * ns.weights_mu.sum() == pytest.approx(28 * PI / 3, rel=1e-12)
        assert circle_l2(mu_rational(cfg), cfg, 1, phi) == pytest.approx(28 * PI / 3, rel=1e-12)


@given(seeds)
@settings(deadline=None, max_examples=20)
def test_mu_norm_self_consistency_random(seed):
    rng = np.random.default_rng(seed)
    cfg = sampling.random_circle_config(rng)
    phi = rng.uniform(0, TWO_PI)
    ns = CircleBlaschke(cfg).solve_nodes(2, phi)
    closed = mu_l2_closed(cfg)
    assert rel(PI * cfg.radius * ns.weights_mu.sum(), closed) < 1e-10


# --------------------------------------------------------------------------
# segment and half-plane rules
# --------------------------------------------------------------------------


def test_segment_basics():
    cfg = SegmentPoleConfig((2.0,))
    assert segment_integral(ONE, cfg, 2, 0.5) == pytest.approx(PI, rel=1e-13)
    assert abs(segment_integral(RationalFunction.polynomial([0, 1]), cfg, 2, 0.5)) < 1e-13


@pytest.mark.parametrize("s", [1, 2, 4, 7])
def test_segment_chebyshev_u(s):
    f = RationalFunction.polynomial(chebyshev_u_coefficients(s - 1))
    assert segment_l2(f, SegmentPoleConfig(()), s, 0.3) == pytest.approx(PI * s, rel=1e-12)


@pytest.mark.parametrize("s", [1, 2, 3, 5, 8])
def test_gauss_chebyshev_nodes(s):
    rule = segment_integral_rule(SegmentPoleConfig(()), 2 * s, PI)
    x = np.sort(rule.nodes.real)[::2]
    expected = np.sort(np.cos((2 * np.arange(1, s + 1) - 1) * PI / (2 * s)))
    np.testing.assert_allclose(x, expected, atol=1e-12)
    # the rule keeps every circle node, so each abscissa carries two equal weights
    assert rule.weights.sum() == pytest.approx(PI)


def test_halfplane_basics():
    cfg = HalfPlanePoleConfig((1j,))
    assert halfplane_l2(RationalFunction.pole_term(1j), cfg, 1) == pytest.approx(PI, rel=1e-13)
    with pytest.raises(PhiAtInfinityNode):
        halfplane_l2(RationalFunction.pole_term(1j), cfg, 1, 0.0)


@given(seeds)
@settings(deadline=None, max_examples=15)
def test_halfplane_mu1_identity(seed):
    rng = np.random.default_rng(seed)
    cfg = sampling.random_halfplane_config(rng)
    phi = rng.uniform(0.1, TWO_PI - 0.1)
    ns = HalfPlaneBlaschke(cfg).solve_nodes(2, phi)
    value = halfplane_l2(mu1_rational(cfg), cfg, 1, phi)
    assert rel(value, PI / 2 * ns.weights_mu.sum()) < 1e-10


def test_six_point_nodes():
    rule = halfplane_l2_rule(HalfPlanePoleConfig((1j,)), 3, PI)
    a, b = 2 + math.sqrt(3), 2 - math.sqrt(3)
    np.testing.assert_allclose(np.sort(rule.nodes.real), [-a, -1, -b, b, 1, a], atol=1e-12)
    w = dict(zip(np.round(rule.nodes.real, 9), rule.weights))
    assert w[1.0] == pytest.approx(PI / 3)
    assert w[round(a, 9)] == pytest.approx(2 * a * PI / 3)


# --------------------------------------------------------------------------
# SPF identities
# --------------------------------------------------------------------------


def test_spf_single_pole():
    ids = spf_l2_identities(SimplePartialFraction((1j,)))
    for v in (ids.norm_sq, ids.via_re, ids.via_mu):
        assert v == pytest.approx(PI, rel=1e-12)
    assert ids.mu_im_gap < 1e-14


def test_spf_two_poles():
    ids = spf_l2_identities(SimplePartialFraction((1j, 1 + 2j)))
    assert ids.spread() < 1e-9
    assert ids.mu_im_gap < 1e-12


def test_spf_phi_sweep():
    p = SimplePartialFraction((1j, 1 + 2j, -0.5 + 0.7j))
    vals = [spf_l2_identities(p, phi).via_mu for phi in np.linspace(0.3, 6.0, 10)]
    assert (max(vals) - min(vals)) / vals[0] < 1e-10


def test_spf_errors():
    with pytest.raises(ConfigError):
        spf_l2_identities(SimplePartialFraction((-1j,)))
    with pytest.raises(PhiAtInfinityNode):
        spf_rule(SimplePartialFraction((1j,)), 0.0)


# --------------------------------------------------------------------------
# oracle agreement and phi-invariance on random admissible input
# --------------------------------------------------------------------------


@given(seeds, st.integers(1, 3), st.booleans())
@settings(deadline=None, max_examples=25)
def test_circle_integral_oracle(seed, s, boundary):
    rng = np.random.default_rng(seed)
    cfg = sampling.random_circle_config(rng)
    f = sampling.random_circle_function(rng, cfg, s, "circle-integral", boundary=boundary)
    assert rel(circle_integral(f, cfg, s, rng.uniform(0, TWO_PI)), integrate_circle(f, cfg.radius).value) < 1e-9


@given(seeds, st.integers(1, 3), st.integers(1, 3), st.booleans())
@settings(deadline=None, max_examples=25)
def test_circle_l2m_oracle(seed, s, m, boundary):
    rng = np.random.default_rng(seed)
    cfg = sampling.random_circle_config(rng)
    f = sampling.random_circle_function(rng, cfg, s, "circle-l2", boundary=boundary)
    oracle = integrate_circle(lambda z: _abs2(f(z)) ** m, cfg.radius).value
    assert rel(circle_l2m(f, cfg, s, m, rng.uniform(0, TWO_PI)), oracle) < 1e-9


@given(seeds, st.integers(1, 3), st.booleans())
@settings(deadline=None, max_examples=20)
def test_segment_oracle(seed, s, boundary):
    rng = np.random.default_rng(seed)
    cfg = sampling.random_segment_config(rng)
    f = sampling.random_segment_function(rng, cfg, s, boundary=boundary)
    phi = rng.uniform(0, TWO_PI)
    ref = integrate_segment_weighted(lambda x: f(x.astype(complex))).value
    assert rel(segment_integral(f, cfg, s, phi), ref) < 1e-9
    ref2 = integrate_segment_weighted(lambda x: _abs2(f(x.astype(complex)))).value
    assert rel(segment_l2(f, cfg, s, phi), ref2) < 1e-9


@given(seeds, st.integers(1, 3), st.booleans())
@settings(deadline=None, max_examples=20)
def test_halfplane_oracle(seed, s, boundary):
    rng = np.random.default_rng(seed)
    cfg = sampling.random_halfplane_config(rng)
    f = sampling.random_halfplane_function(rng, cfg, s, boundary=boundary)
    ref = integrate_real_line(lambda x: _abs2(f(x.astype(complex)))).value
    assert rel(halfplane_l2(f, cfg, s, rng.uniform(0.1, TWO_PI - 0.1)), ref) < 1e-9


@given(seeds, st.integers(1, 3))
@settings(deadline=None, max_examples=10)
def test_phi_invariance(seed, s):
    rng = np.random.default_rng(seed)
    cfg = sampling.random_circle_config(rng)
    f = sampling.random_circle_function(rng, cfg, s, "circle-l2", boundary=True)
    vals = [circle_l2(f, cfg, s, phi) for phi in rng.uniform(0, TWO_PI, 25)]
    assert (max(vals) - min(vals)) / abs(vals[0]) < 1e-10


@given(seeds, st.integers(1, 4))
@settings(deadline=None, max_examples=30)
def test_weights_positive_and_sum(seed, s):
    rng = np.random.default_rng(seed)
    cfg = sampling.random_circle_config(rng)
    phi = rng.uniform(0, TWO_PI)
    for rule in (circle_integral_rule(cfg, s, phi), circle_l2_rule(cfg, s, phi)):
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(TWO_PI * cfg.radius, rel=1e-12)
    seg = segment_integral_rule(sampling.random_segment_config(rng), s, phi)
    assert np.all(seg.weights > 0) and seg.weights.sum() == pytest.approx(PI, rel=1e-12)


# --------------------------------------------------------------------------
# negative control
# --------------------------------------------------------------------------


def test_excess_multiplicity_breaks_exactness():
    s, a = 1, 0.85
    cfg = CirclePoleConfig.with_origin(1.0, [a])
    q = 1 / a
    f = RationalFunction((Term(q, s + 1, 1.0),), poly=(0.1,))
    assert not check_admissible(f, cfg, s, "circle-integral")
    rule = circle_integral_rule(cfg, s, 0.0)
    raw = rule.apply(f(rule.nodes))
    ref = integrate_circle(f, 1.0).value
    assert rel(raw, ref) > 1e-4


# --------------------------------------------------------------------------
# export
# --------------------------------------------------------------------------


def test_rule_json_and_csv():
    rule = circle_l2_rule(CirclePoleConfig.with_origin(2.0, [0.5 + 0.5j]), 2, 0.25)
    d = json.loads(json.dumps(rule.to_dict()))
    assert d["provenance"] == "eq4" and d["s"] == 2 and d["phi"] == 0.25
    assert len(d["nodes"]) == len(d["weights"]) == 8
    nodes = np.array([complex(*z) for z in d["nodes"]])
    np.testing.assert_array_equal(nodes, rule.nodes)
    np.testing.assert_array_equal(d["weights"], rule.weights)

    lines = rule.to_csv().strip().splitlines()
    assert lines[0] == "node_re,node_im,weight"
    parsed = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    np.testing.assert_array_equal(parsed[:, 0] + 1j * parsed[:, 1], rule.nodes)
    np.testing.assert_array_equal(parsed[:, 2], rule.weights)


@pytest.mark.parametrize("build, prov", [
    (lambda: circle_integral_rule(CirclePoleConfig.with_origin(1.0, []), 1), "eq3"),
    (lambda: circle_l2m_rule(CirclePoleConfig.with_origin(1.0, []), 1, 2), "eq6"),
    (lambda: segment_integral_rule(SegmentPoleConfig(()), 1), "eq7"),
    (lambda: halfplane_l2_rule(HalfPlanePoleConfig((1j,)), 1), "eq10"),
    (lambda: spf_rule(SimplePartialFraction((1j,))), "eq16"),
])
def test_provenance_labels(build, prov):
    assert build().provenance == prov
