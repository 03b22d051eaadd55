import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spiralbend import polygon_cover as pc
from spiralbend.errors import InvalidArgument, InvalidBody


def _intersect(p1, p2, q1, q2):
    # Independent oracle: solve p1 + s (p2 - p1) = q1 + t (q2 - q1).
    p1, p2, q1, q2 = map(np.asarray, (p1, p2, q1, q2))
    M = np.column_stack([p2 - p1, q1 - q2])
    s, _ = np.linalg.solve(M, q1 - p1)
    return p1 + s * (p2 - p1)


def test_omega_value():
    assert pc.omega(1 / 16) == 0.5


def test_disk_profile_radius():
    p = pc.sample_profile(pc.disk(), 16)
    assert p.radii[1] == pytest.approx(math.sqrt(1 - (15 / 16) ** 2), rel=1e-12)
    assert p.radii[1] == pytest.approx(0.34799, abs=1e-5)
    assert p.radii[0] == 0.0 and p.top == "sharp"


def test_square_profile():
    p = pc.sample_profile(pc.square(), 8)
    np.testing.assert_allclose(p.radii, 1.0, rtol=1e-12)
    assert p.top == "flat"


def test_diamond_profile():
    k = 16
    p = pc.sample_profile(pc.diamond(), k)
    np.testing.assert_allclose(p.radii, np.arange(k + 1) / k, atol=1e-12)
    assert p.top == "sharp"


def test_profile_validation():
    with pytest.raises(ValueError):
        pc.RadialProfile(4, np.linspace(0, 1, 5))
    with pytest.raises(InvalidBody):
        pc.RadialProfile(8, np.linspace(0, 0.5, 9))
    with pytest.raises(InvalidBody):
        pc.RadialProfile(8, np.r_[np.linspace(0, 1, 8), 0.9])


def test_gauge_normalization_check():
    with pytest.raises(InvalidBody):
        pc.sample_profile(pc.ScaledBody(pc.disk(), 2.0, 1.0), 8)


@pytest.mark.parametrize(
    "fn, concave",
    [(lambda t: np.sqrt(1 - t * t), True), (lambda t: 1 - t * t, True), (lambda t: t * t, False)],
)
def test_radial_function_examples(fn, concave):
    t = np.linspace(-1, 1, 401)
    rep = pc.check_radial_function(t, fn(t))
    assert rep.concave is concave
    assert rep.passed is concave


def test_polygon_endpoints():
    for body in (pc.disk(), pc.diamond(), pc.square()):
        c = pc.build_polygon(pc.sample_profile(body, 16))
        np.testing.assert_array_equal(c.P[0], [0.0, 1.0])
        np.testing.assert_allclose(c.P[16], [1 + 1 / 16, 0.0], rtol=1e-15)


def test_sharp_top_closed_form_against_solver():
    p = pc.sample_profile(pc.diamond(), 16)
    c = pc.build_polygon(p)
    r1, d = p.radii[1], p.delta
    assert r1 == pytest.approx(1 / 16) and d == 1 / 16
    oracle = _intersect((-r1, 1 - d), (0.0, 1.0), (1.0, 0.0), c.P[1])
    alpha = pc.sharp_top_alpha(r1, d)
    assert oracle[0] == pytest.approx(r1 * alpha, rel=1e-12)
    np.testing.assert_allclose(c.R[0], oracle, rtol=1e-12)
    assert c.diagnostics["R0_closed_form_gap"] <= 1e-12


def test_disk_outer_corner_chain():
    c = pc.build_polygon(pc.sample_profile(pc.disk(), 16))
    for i in range(16):
        a, b, q = c.P[i], c.P[i + 1], c.R[i]
        cross = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
        assert cross >= 0.0
    assert all(c.outer_corners())


def test_line_intersection_parallel():
    assert pc.line_intersection((0, 0), (1, 0), (0, 1), (1, 1)) is None
    np.testing.assert_allclose(pc.line_intersection((0, 0), (1, 1), (0, 1), (1, 0)), [0.5, 0.5])


@pytest.mark.parametrize("k", [8, 16, 32, 64])
def test_disk_certified(k):
    p = pc.sample_profile(pc.disk(), k)
    cert = pc.verify_containment(pc.build_polygon(p), p, samples=10_000)
    assert cert.certified
    assert cert.counterexamples == []


def test_diamond_sharp_top_clauses():
    p = pc.sample_profile(pc.diamond(), 16)
    cert = pc.verify_containment(pc.build_polygon(p), p)
    assert cert.certified
    names = {cl.name for cl in cert.clauses}
    assert {"R0_x", "R0_y", "alpha"} <= names
    assert all(cl.passed for cl in cert.clauses)


def test_superellipse_certified():
    p = pc.sample_profile(pc.superellipse(3.0), 32)
    assert pc.verify_containment(pc.build_polygon(p), p).certified


def test_independent_gauge_of_samples():
    # Recompute the disk gauge of boundary samples directly.
    p = pc.sample_profile(pc.disk(), 16)
    c = pc.build_polygon(p)
    pts = pc.boundary_samples(c.ring(), 10_000)
    assert np.max(np.hypot(pts[:, 0], pts[:, 1])) <= 1 + c.omega


def test_interval_body_examples():
    p = pc.sample_profile(pc.disk(), 16)
    assert pc.verify_interval_body(pc.disk(), p).certified
    big = pc.verify_interval_body(pc.ScaledBody(pc.disk(), 2.0, 2.0), p)
    assert not big.certified
    assert len(big.failed_levels) > 0


def test_interval_body_horizontal_bump():
    d = 1 / 16
    H = pc.ProfileBody(lambda y: (1 + d * y * y) * np.sqrt(np.clip(1 - y * y, 0, None)), name="bump")
    p = pc.sample_profile(pc.disk(), 16)
    assert pc.verify_interval_body(H, p).certified


def test_section_check_examples():
    r = lambda y: np.cos(np.pi * y / 2)
    d = 1 / 16
    good = pc.section_check(r, lambda y: (1 + d * y * y) * r(y), 16)
    assert good.certified and good.level_k_ok
    bad = pc.section_check(r, lambda y: 1.3 * r(y), 16)
    assert not bad.certified
    assert bad.interval.failed_levels


@given(st.floats(1.05, 8.0), st.sampled_from([8, 16, 32]))
def test_property_lp_polygon_certified(p_exp, k):
    p = pc.sample_profile(pc.LpBall(p_exp), k)
    assert pc.verify_containment(pc.build_polygon(p), p, samples=2000).certified


@given(st.floats(1.0, 10.0), st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 10))
def test_property_gauge_homogeneous(p_exp, x, y, lam):
    B = pc.LpBall(p_exp)
    g = B.gauge(np.array([x, lam * x]), np.array([y, lam * y]))
    assert g[1] == pytest.approx(lam * g[0], rel=1e-12, abs=1e-300)


def test_interval_body_rejects_pure_horizontal_stretch():
    # The stretched boundary passes (1 + delta, 0), outside the axis interval clause.
    p = pc.sample_profile(pc.disk(), 16)
    cert = pc.verify_interval_body(pc.ScaledBody(pc.disk(), 1 + p.delta, 1.0), p)
    assert not cert.certified
