"""Partial-fraction representation and evaluation."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpquad.errors import PoleProximity
from sharpquad.rational import (
    INFINITY,
    RationalFunction,
    SimplePartialFraction,
    Term,
    abs_squared_on_contour,
    evaluate,
    pole_multiplicity_profile,
)


# --------------------------------------------------------------------------
# naive evaluator: exact Gaussian-rational arithmetic on (re, im) Fraction pairs
# --------------------------------------------------------------------------


def _mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _inv(a):
    d = a[0] * a[0] + a[1] * a[1]
    return (a[0] / d, -a[1] / d)


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _frac(z):
    return (Fraction(z.real), Fraction(z.imag))


def naive_eval(terms, poly, poly_inv, z):
    """Sum the representation term by term in exact arithmetic."""
    zq = _frac(z)
    total = (Fraction(0), Fraction(0))
    for pole, order, coef in terms:
        d = _add(zq, (-Fraction(pole.real), -Fraction(pole.imag)))
        p = (Fraction(1), Fraction(0))
        for _ in range(order):
            p = _mul(p, d)
        total = _add(total, _mul(_frac(coef), _inv(p)))
    zp = (Fraction(1), Fraction(0))
    for c in poly:
        total = _add(total, _mul(_frac(c), zp))
        zp = _mul(zp, zq)
    w = _inv(zq) if poly_inv else None
    wp = w
    for c in poly_inv:
        total = _add(total, _mul(_frac(c), wp))
        wp = _mul(wp, w)
    return complex(float(total[0]), float(total[1]))


small_int = st.integers(-4, 4)
gauss_int = st.builds(complex, small_int, small_int)


@st.composite
def integer_rationals(draw):
    poles = draw(st.lists(gauss_int.filter(lambda p: p != 0), min_size=0, max_size=3, unique=True))
    terms = []
    for p in poles:
        for k in range(1, draw(st.integers(1, 3)) + 1):
            terms.append((p, k, complex(draw(small_int), draw(small_int))))
    poly = [complex(draw(small_int), draw(small_int)) for _ in range(draw(st.integers(0, 3)))]
    inv = [complex(draw(small_int), draw(small_int)) for _ in range(draw(st.integers(0, 2)))]
    return terms, poly, inv


def _build(terms, poly, inv):
    return RationalFunction(tuple(Term(p, k, c) for p, k, c in terms), tuple(poly), tuple(inv))


# --------------------------------------------------------------------------
# examples
# --------------------------------------------------------------------------


def test_evaluate_simple_pole_at_origin():
    assert evaluate(RationalFunction.pole_term(1j), 0.0) == pytest.approx(1j)


def test_evaluate_imaginary_part_matches_weight():
    f = RationalFunction.pole_term(1j)
    for x in (-2.0, 0.3, 5.0):
        assert f(x).imag == pytest.approx(1 / (x * x + 1), rel=1e-15)


def test_evaluate_polynomial_plus_fraction():
    f = RationalFunction((Term(0.5, 1, 1.0),), poly=(0, 0, 1))
    assert f(2.0) == pytest.approx(4 + 2 / 3, rel=1e-15)


@pytest.mark.parametrize("f, z, expected", [
    (RationalFunction.pole_term(0.5), 1.0, 4.0),
    (RationalFunction.pole_term(1j), 0.0, 1.0),
    (RationalFunction.pole_term(1j, 3), 1.0, 1 / 8),
])
def test_abs_squared(f, z, expected):
    assert abs_squared_on_contour(f, z) == pytest.approx(expected, rel=1e-14)


def test_profile_examples():
    a = 0.3 + 0.1j
    f = RationalFunction((Term(a, 2, 1.0),), poly=(0, 0, 0, 1))
    assert pole_multiplicity_profile(f) == {a: 2, INFINITY: 3}
    g = RationalFunction(poly_inv=(1, 1))
    assert pole_multiplicity_profile(g) == {0j: 2}
    p = SimplePartialFraction((1j, 2j))
    assert p.pole_profile() == {1j: 1, 2j: 1}


def test_pole_terms_at_origin_move_to_inverse_tail():
    f = RationalFunction((Term(0, 2, 3.0), Term(0, 1, 1.0)))
    assert f.terms == ()
    assert f.poly_inv == (1.0, 3.0)


def test_normalization_merges_and_drops_zeros():
    f = RationalFunction((Term(1j, 1, 2.0), Term(1j, 1, -2.0), Term(2, 1, 1.0)), poly=(1, 0, 0))
    assert f.terms == (Term(2, 1, 1.0),)
    assert f.poly == (1,)


def test_infinity_sentinel_is_unique_and_hashable():
    assert {INFINITY: 1}[INFINITY] == 1
    assert INFINITY != 0
    assert repr(INFINITY)


def test_pole_proximity_raises_with_pole():
    f = RationalFunction.pole_term(0.5)
    with pytest.raises(PoleProximity) as info:
        f(0.5 + 1e-14)
    assert info.value.pole == 0.5
    # 1e-10 away is still fine
    assert np.isfinite(f(0.5 + 1e-10))


def test_term_validation():
    with pytest.raises(ValueError):
        Term(1j, 0, 1.0)


def test_json_roundtrip():
    f = RationalFunction((Term(0.5 + 0.25j, 2, 1 - 1j),), poly=(1, 2j), poly_inv=(3,))
    g = RationalFunction.from_dict(f.to_dict())
    assert g == f
    d = f.to_dict()
    assert d["terms"][0]["pole"] == [0.5, 0.25]


def test_spf_conversion_is_lossless():
    p = SimplePartialFraction((1j, 1 + 2j, -0.5 + 0.3j))
    z = np.array([0.1, 2.0 + 1j, -3j])
    np.testing.assert_allclose(p(z), p.to_rational()(z), rtol=1e-15)
    np.testing.assert_allclose(p(z), sum(1 / (z - zk) for zk in p.poles), rtol=1e-14)


def test_laurent_constructor():
    f = RationalFunction.laurent([1, 2, 3], -1)
    z = 0.7 - 0.2j
    assert f(z) == pytest.approx(1 / z + 2 + 3 * z, rel=1e-15)


# --------------------------------------------------------------------------
# properties
# --------------------------------------------------------------------------


@given(integer_rationals(), gauss_int, st.integers(1, 7))
@settings(deadline=None, max_examples=200)
def test_matches_exact_naive_evaluator(rep, z_int, denom):
    terms, poly, inv = rep
    z = z_int / denom + 0.1234j
    f = _build(terms, poly, inv)
    expected = naive_eval(terms, poly, inv, z)
    got = f(z)
    assert abs(got - expected) <= 1e-13 * max(abs(expected), 1.0)


@given(integer_rationals(), st.floats(-3, 3), st.floats(-3, 3))
@settings(deadline=None, max_examples=100)
def test_conjugate_equivariance(rep, x, y):
    f = _build(*rep)
    z = complex(x, y) + 0.017j
    try:
        v = f(z)
    except PoleProximity:
        return
    assert f.conj()(z.conjugate()) == pytest.approx(v.conjugate(), rel=1e-13, abs=1e-13)


@given(integer_rationals(), st.integers(0, 2**32 - 1))
@settings(deadline=None, max_examples=50)
def test_normalization_idempotent_and_value_preserving(rep, seed):
    terms, poly, inv = rep
    # duplicated and zero terms exercise the merge path
    raw = RationalFunction(
        tuple(Term(p, k, c) for p, k, c in terms) + tuple(Term(p, k, 0.5 * c) for p, k, c in terms)
        + (Term(3 + 3j, 1, 0.0),),
        tuple(poly) + (0, 0), tuple(inv),
    )
    once = raw.normalized()
    assert once.normalized() == once
    rng = np.random.default_rng(seed)
    z = rng.uniform(-5, 5, 100) + 1j * rng.uniform(-5, 5, 100) + 0.0101j
    try:
        ref = sum(1.5 * c / (z - p) ** k for p, k, c in terms) + np.polyval(poly[::-1], z) \
            + (np.polyval(list(inv[::-1]) + [0], 1 / z) if inv else 0)
    except ZeroDivisionError:
        return
    np.testing.assert_allclose(once(z), ref, rtol=1e-12, atol=1e-12)


@given(st.lists(st.builds(complex, st.floats(-3, 3), st.floats(0.1, 3)), min_size=1, max_size=5))
@settings(deadline=None)
def test_spf_json_roundtrip(poles):
    p = SimplePartialFraction(tuple(poles))
    assert SimplePartialFraction.from_dict(p.to_dict()).poles == p.poles
