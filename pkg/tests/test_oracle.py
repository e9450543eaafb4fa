"""Reference integrator against closed forms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpquad.blaschke import CircleBlaschke, CirclePoleConfig
from sharpquad.chebyshev import chebyshev_u
from sharpquad.errors import NonConvergence
from sharpquad.oracle import (
    adaptive_integrate,
    integrate_circle,
    integrate_real_line,
    integrate_segment_weighted,
    integrate_trig,
    lp_norm,
)
from sharpquad.rational import SimplePartialFraction

PI = np.pi


def _mu_squared(z):
    sys = CircleBlaschke(CirclePoleConfig.with_origin(1.0, [0.5]))
    return sys.mu(z) ** 2


def _rho2_abs2(x):
    v = SimplePartialFraction((1j, 2j))(x.astype(complex))
    return (v * np.conj(v)).real


CLOSED_FORMS = {
    "circle-one": (lambda **kw: integrate_circle(lambda z: np.ones_like(z.real), 2.0, **kw), 4 * PI),
    "circle-resolvent": (lambda **kw: integrate_circle(lambda z: np.abs(z - 0.5) ** -2, 1.0, **kw),
                         8 * PI / 3),
    "circle-mu-squared": (lambda **kw: integrate_circle(_mu_squared, 1.0, **kw), 28 * PI / 3),
    "trig-exp": (lambda **kw: integrate_trig(lambda t: np.exp(3j * t), **kw), 0.0),
    "segment-one": (lambda **kw: integrate_segment_weighted(lambda x: np.ones_like(x), **kw), PI),
    "segment-x2": (lambda **kw: integrate_segment_weighted(lambda x: x * x, **kw), PI / 2),
    "segment-u3": (lambda **kw: integrate_segment_weighted(lambda x: chebyshev_u(3, x) ** 2, **kw),
                   4 * PI),
    "line-cauchy": (lambda **kw: integrate_real_line(lambda x: 1 / (x * x + 1), **kw), PI),
    "line-cauchy-sq": (lambda **kw: integrate_real_line(lambda x: 1 / (x * x + 1) ** 2, **kw), PI / 2),
    "line-spf": (lambda **kw: integrate_real_line(_rho2_abs2, **kw), 17 * PI / 6),
}


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_closed_forms(name):
    run, exact = CLOSED_FORMS[name]
    res = run()
    assert res.converged
    if exact == 0:
        assert abs(res.value) < 1e-13
    else:
        assert abs(res.value - exact) <= 1e-12 * abs(exact)
    assert res.abs_error_estimate <= max(1e-12 * abs(res.value), 1e-14) * 1.0001 or \
        res.abs_error_estimate <= 64 * np.finfo(float).eps * max(abs(exact), 1.0)


@pytest.mark.parametrize("k", [1, 2, 5, -4])
def test_exponentials_vanish(k):
    assert abs(integrate_trig(lambda t: np.exp(1j * k * t)).value) < 1e-13


@pytest.mark.parametrize("p", [0.5, 1, 2, 3.5])
def test_lp_norm_constant(p):
    res = lp_norm(lambda t: np.full_like(t, 3.0), "trig", p)
    assert res.value == pytest.approx(3 * (2 * PI) ** (1 / p), rel=1e-12)


def test_lp_norm_u3_segment():
    res = lp_norm(lambda x: chebyshev_u(3, x), "segment", 2)
    assert res.value == pytest.approx(math.sqrt(4 * PI), rel=1e-12)


def test_lp_norm_rejects_bad_input():
    with pytest.raises(ValueError):
        lp_norm(np.abs, "trig", 0)
    with pytest.raises(ValueError):
        lp_norm(np.abs, "sphere", 2)


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_tightening_is_monotone(name):
    run, exact = CLOSED_FORMS[name]
    targets = [1e-4, 1e-6, 1e-8, 1e-10, 1e-12]
    errors = []
    for tol in targets:
        res = run(rel_tol=tol)
        errors.append(abs(res.value - exact))
    floor = 1e-14 * max(abs(exact), 1.0)
    for a, b in zip(errors, errors[1:]):
        assert b <= a + floor


def test_nonconvergence_carries_partial_result():
    with pytest.raises(NonConvergence) as info:
        adaptive_integrate(lambda t: np.sin(1 / np.maximum(t, 1e-300)), 0.0, 1.0, max_evaluations=5000)
    assert info.value.partial is not None
    assert not info.value.partial.converged


@given(st.floats(0.05, 0.95), st.floats(0, 2 * PI), st.sampled_from([0.5, 1.0, 2.0]))
@settings(deadline=None, max_examples=40)
def test_poisson_kernel_resolvent(rho, theta, r):
    a = rho * r * np.exp(1j * theta)
    res = integrate_circle(lambda z: np.abs(z - a) ** -2, r)
    assert res.value == pytest.approx(2 * PI * r / (r * r - abs(a) ** 2), rel=1e-11)


@given(st.floats(0.1, 5), st.floats(-5, 5))
@settings(deadline=None, max_examples=40)
def test_line_cauchy_shifted(y, x0):
    res = integrate_real_line(lambda x: 1 / ((x - x0) ** 2 + y * y))
    assert res.value == pytest.approx(PI / y, rel=1e-11)
