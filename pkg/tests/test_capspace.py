import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spiralbend import capspace as cs
from spiralbend.bending import make_bending
from spiralbend.errors import PreconditionFailed
from spiralbend.norms2d import l2


@pytest.fixture(scope="module")
def small():
    return cs.build_capspace(0.2, pool=3000, seed=0)


def test_structured_parameters_delta_02():
    sigma, tau, a = cs.structured_parameters(0.2)
    assert sigma == pytest.approx(0.98, abs=1e-15)
    assert a == pytest.approx(0.20306, abs=1e-5)
    assert tau == pytest.approx(0.19900, abs=1e-5)
    assert 1 / math.sqrt(1 + a * a) == pytest.approx(cs.cap_height(0.2), rel=1e-14)


def test_structured_count():
    for d in (0.1, 0.2):
        c = cs.structured_centers(d)
        assert c.shape == (32, 4)
        np.testing.assert_allclose(np.linalg.norm(c, axis=1), 1.0, rtol=1e-14)


def test_net_quality(small):
    assert small.min_separation >= small.delta
    assert small.structured_count == 32
    # Y1 and Y2 are net members without caps.
    assert len(small.centers) == 32 + small.net_size - 2 - small.rejected
    assert small.covering_radius > 0


def test_summands_isometric(small, rng):
    y = rng.standard_normal((1000, 2))
    x1 = np.zeros((1000, 4))
    x1[:, :2] = y
    x2 = np.zeros((1000, 4))
    x2[:, 2:] = y
    n = np.linalg.norm(y, axis=1)
    np.testing.assert_allclose(small.norm(x1), n, rtol=1e-14)
    np.testing.assert_allclose(small.norm(x2), n, rtol=1e-14)


def test_structured_center_norm(small):
    sigma, tau, _ = cs.structured_parameters(0.2)
    x = np.array([sigma, 0.0, tau, 0.0])
    assert float(small.norm(x)) == pytest.approx(1 / small.h, rel=1e-14)
    assert 1 / small.h > 1


def test_sandwich(small, rng):
    x = rng.standard_normal((100_000, 4))
    nx = small.norm(x)
    n2 = np.linalg.norm(x, axis=1)
    assert np.all(small.h * nx <= n2 * (1 + 1e-12))
    assert np.all(n2 <= nx * (1 + 1e-12))


def test_tree_matches_dense(small, rng):
    x = rng.standard_normal((2000, 4))
    np.testing.assert_allclose(small.norm(x), small.norm_dense(x), rtol=1e-13)


def test_certify_properties(small):
    cert = cs.certify_properties(small, samples=5000, triples=20_000)
    assert cert.passed
    assert cert.projection_max <= 1.0 + 1e-12 and cert.projection_attained
    assert cert.eps_gamma.startswith("not certified")


def test_save_load_roundtrip(small, tmp_path, rng):
    path = tmp_path / "caps.json"
    small.save(path)
    C = cs.CapSpace4.load(path)
    x = rng.standard_normal((100, 4))
    np.testing.assert_array_equal(C.norm(x), small.norm(x))


def test_build_is_seed_deterministic():
    a = cs.build_capspace(0.2, pool=800, seed=3)
    b = cs.build_capspace(0.2, pool=800, seed=3)
    np.testing.assert_array_equal(a.centers, b.centers)


def test_flatness_witness_structured(small):
    sigma, tau, _ = cs.structured_parameters(0.2)
    th = math.atan2(tau, sigma)
    Z = np.array([[math.cos(th), 0], [0, 1], [math.sin(th), 0], [0, 0]])
    w = cs.flatness_witness(small, Z, 0.1)
    assert w.found
    assert w.cap_index < small.structured_count
    assert w.midpoint_norm == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(w.endpoint_norms, 1.0, atol=1e-10)
    assert w.chord_length > 0


def test_flatness_precondition(small):
    with pytest.raises(PreconditionFailed):
        cs.flatness_witness(small, cs.Y1_FRAME, 0.1)


def test_flatness_survey_small(small):
    s = cs.flatness_survey(small, planes=100, seed=1)
    assert s.rate >= 0.99


def test_component_bound_examples(small):
    r = cs.component_bound_check(small, cs.Y1_FRAME, 0.1, samples=2000)
    assert r.passed and r.worst_ratio == 0.0
    th = 2 * math.asin(0.1 / 4)
    Z = np.array([[math.cos(th), 0], [0, 1], [math.sin(th), 0], [0, 0]])
    r = cs.component_bound_check(small, Z, 0.1, samples=10_000)
    assert r.passed


def test_color_identity_all_blue(small):
    T = lambda p: np.concatenate([p, np.zeros_like(p)], axis=1)
    prof = cs.color_segment(T, [0.1, 0.2], [2.0, -1.0], small, 0.1, samples=500)
    assert prof.blue == 1.0 and prof.flagged == 0
    assert prof.ftc_relative <= 1e-10


def test_color_spiral_regression(small):
    T = make_bending(0.5, 1.0, l2(), 2, c=1.0)
    R = T.params.R
    prof = cs.color_segment(T.as_map(), [0.5, 0.0], [1.5 * R, 0.0], small, 0.1, samples=1000)
    assert prof.blue > 0 and prof.yellow > 0
    assert prof.blue + prof.yellow + prof.neither == pytest.approx(1.0)
    assert prof.flagged == 0


def test_color_flags_nonfinite(small):
    T = lambda p: np.where(p[:, :1] > 1.0, np.nan, 1.0) * np.concatenate([p, p], axis=1)
    prof = cs.color_segment(T, [0.0, 0.0], [2.0, 0.0], small, 0.1, samples=100)
    assert prof.flagged > 0


def test_ftc_convergence_order():
    T = lambda p: np.stack([np.sin(p[:, 0]), np.cos(p[:, 1]), p[:, 0] * p[:, 1], np.exp(0.3 * p[:, 0])], axis=1)
    errs = [cs.color_segment(T, [0.0, 0.0], [1.0, 2.0], gamma=0.1, samples=n).ftc_relative for n in (50, 100, 200, 400)]
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 0.9)
    assert cs.color_segment(T, [0.0, 0.0], [1.0, 2.0], gamma=0.1, samples=1000).ftc_relative <= 1e-4


def test_precondition_chain_examples():
    rep = cs.precondition_chain(0.1, 0.05, 0.1)
    assert rep.holds("gamma_range") and rep.holds("delta_choice") and rep.holds("eps_below_gamma")
    assert rep.holds("eps_below_eps_gamma") is None
    assert rep.conditions["delta_choice"]["lhs"] == pytest.approx(0.995, abs=1e-15)
    assert rep.conditions["delta_choice"]["rhs"] == pytest.approx(0.9412, abs=1e-4)
    assert rep.holds("contradiction") is False
    edge = cs.precondition_chain(2 ** (1 / 6) - 1, 0.05, 0.1)
    assert edge.holds("gamma_range") is False


@given(st.floats(0.001, 0.12), st.floats(0.05, 0.3))
def test_property_chain_contradiction_false_when_delta_holds(gamma, delta):
    eps = gamma / 2
    rep = cs.precondition_chain(gamma, eps, delta)
    if rep.holds("delta_choice") and rep.holds("eps_below_gamma"):
        assert rep.holds("contradiction") is False


@given(st.integers(0, 2**31))
def test_property_cap_norm_axioms(seed):
    C = _cached()
    r = np.random.default_rng(seed)
    x, y = r.standard_normal((2, 50, 4))
    lam = r.uniform(-5, 5, (50, 1))
    assert np.all(C.norm(x + y) <= (C.norm(x) + C.norm(y)) * (1 + 1e-12))
    np.testing.assert_allclose(C.norm(lam * x), np.abs(lam[:, 0]) * C.norm(x), rtol=1e-12)


_CACHE = {}


def _cached():
    if "C" not in _CACHE:
        _CACHE["C"] = cs.build_capspace(0.2, pool=1000, seed=9)
    return _CACHE["C"]
