"""Samplers, verification suites, manifests and the worked examples."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpquad import sampling, verify, worked
from sharpquad.quadrature import check_admissible
from sharpquad.rational import INFINITY

seeds = st.integers(0, 2**32 - 1)


# --------------------------------------------------------------------------
# samplers
# --------------------------------------------------------------------------


@given(seeds)
@settings(deadline=None, max_examples=50)
def test_circle_sampler_respects_bounds(seed):
    rng = np.random.default_rng(seed)
    opts = sampling.SamplerConfig()
    cfg = sampling.random_circle_config(rng)
    assert 1 <= cfg.n <= opts.max_n and cfg.radius in sampling.RADII
    poles = np.array(cfg.inner_poles)
    assert np.all(np.abs(poles) <= opts.inner_fraction * cfg.radius)
    d = np.abs(poles[:, None] - poles[None, :]) + np.eye(len(poles)) * 10
    assert d.min() >= opts.min_separation * cfg.radius - 1e-12


@given(seeds, st.integers(1, 3), st.booleans())
@settings(deadline=None, max_examples=50)
def test_sampled_functions_are_admissible(seed, s, boundary):
    rng = np.random.default_rng(seed)
    cfg = sampling.random_circle_config(rng)
    for kind in ("circle-integral", "circle-l2"):
        f = sampling.random_circle_function(rng, cfg, s, kind, boundary=boundary)
        assert check_admissible(f, cfg, s, kind)
    seg = sampling.random_segment_config(rng)
    assert check_admissible(sampling.random_segment_function(rng, seg, s, boundary), seg, s, "segment")
    hp = sampling.random_halfplane_config(rng)
    assert check_admissible(sampling.random_halfplane_function(rng, hp, s, boundary), hp, s, "halfplane-l2")


def test_boundary_functions_sit_on_the_limit():
    rng = np.random.default_rng(0)
    cfg = sampling.random_circle_config(rng)
    f = sampling.random_circle_function(rng, cfg, 3, "circle-l2", boundary=True)
    prof = f.pole_profile()
    assert prof.get(0j, 0) + prof.get(INFINITY, 0) == 2 * 3 - 1
    assert all(k == 3 for p, k in prof.items() if p is not INFINITY and p != 0)


# --------------------------------------------------------------------------
# suites and manifests
# --------------------------------------------------------------------------


def test_rng_streams_are_independent():
    a = verify._rng(1, "eq3", 0).random(3)
    assert np.array_equal(a, verify._rng(1, "eq3", 0).random(3))
    assert not np.array_equal(a, verify._rng(1, "eq4", 0).random(3))
    assert not np.array_equal(a, verify._rng(2, "eq3", 0).random(3))


def test_case_counts():
    cases = verify.exactness_cases()
    kinds = [c.provenance for c in cases]
    assert kinds.count("eq3") == kinds.count("eq4") == kinds.count("eq6") == 50
    assert kinds.count("eq7") == kinds.count("eq8") == kinds.count("eq10") == 20
    assert any(c.boundary for c in cases if c.provenance == "eq4")
    assert {c.m for c in cases if c.provenance == "eq6"} == {1, 2, 3}


def test_row_direction():
    below = verify.CheckRow("x", "k", 1.0, 1.0, 1e-12, 1e-9)
    above = verify.CheckRow("x", "k", 1.0, 1.0, 1e-3, 1e-4, direction="above")
    assert below.passed and above.passed
    assert not verify.CheckRow("x", "k", 1.0, 1.0, 1e-5, 1e-4, direction="above").passed
    assert isinstance(below.to_dict()["passed"], bool)


@pytest.mark.parametrize("suite", ["lemma1", "closed-norms", "sharpness"])
def test_small_suites_pass(suite):
    rows = verify.run_suite(suite, seed=11)
    assert rows and all(r.passed for r in rows)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_negative_controls_pass_for_other_seeds(seed):
    rows = verify.suite_negative_controls(seed)
    assert len(rows) == 20
    assert all(r.passed for r in rows), [(r.key, r.gap) for r in rows if not r.passed]


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run_suite("nope")


def test_manifest_digest_is_deterministic():
    a = verify.verify_manifest("lemma1", 5, command=["verify", "lemma1"])
    b = verify.verify_manifest("lemma1", 5, command=["verify", "lemma1"])
    assert a.digest() == b.digest()
    assert a.input_hash == b.input_hash
    c = verify.verify_manifest("lemma1", 6, command=["verify", "lemma1"])
    assert c.digest() != a.digest()
    d = json.loads(json.dumps(a.to_dict()))
    assert d["digest"] == a.digest() and d["passed"] is True


def test_manifest_ignores_wall_time():
    m = verify.RunManifest(["x"], {"seed": 1}, [{"suite": "s", "key": "a", "passed": True}], 1.0)
    n = verify.RunManifest(["x"], {"seed": 1}, [{"suite": "s", "key": "a", "passed": True}], 9.0)
    assert m.digest() == n.digest()


# --------------------------------------------------------------------------
# worked examples
# --------------------------------------------------------------------------


def test_four_point_formula_rows():
    rows = worked.segment_example(6)
    for s, four, rule, ref in rows:
        assert abs(four - ref) < 1e-9 * ref
        assert abs(rule - ref) < 1e-9 * ref


def test_six_point_formula_rows():
    for six, rule, ref in worked.halfplane_example(np.random.default_rng(4)):
        assert abs(six - ref) < 1e-9 * ref
        assert abs(rule - ref) < 1e-9 * ref


@pytest.mark.parametrize("k, expected", [(0, math.pi), (1, 0.0), (2, math.pi / 2), (4, 3 * math.pi / 8)])
def test_chebyshev_moments(k, expected):
    assert worked.chebyshev_moment(k) == pytest.approx(expected)


@pytest.mark.parametrize("s", [1, 4, 8])
def test_gauss_chebyshev(s):
    node_err, moment_err = worked.gauss_chebyshev_check(np.random.default_rng(s), s)
    assert node_err < 1e-12 and moment_err < 1e-10
