import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spiralbend import norms2d as nz
from spiralbend.errors import InvalidArgument

finite = st.floats(-1e6, 1e6, allow_nan=False)
families = st.sampled_from(["l1", "l1.5", "l2", "l3", "linf"])


def test_eval_norm_examples():
    assert nz.eval_norm(nz.l2(), 3, 4) == 5.0
    assert nz.eval_norm(nz.l1(), 1, 0) == 1.0
    assert nz.eval_norm(nz.linf(), -2, 1.5) == 2.0


def test_eval_norm_rejects_nonfinite():
    with pytest.raises(InvalidArgument):
        nz.eval_norm(nz.l2(), math.inf, 0.0)


@pytest.mark.parametrize("text", ["l1", "l2", "linf", "l1.5", "l4"])
def test_parse_family_known(text):
    Z = nz.parse_family(text)
    assert nz.eval_norm(Z, 1.0, 0.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("text", ["bogus", "l0.5", "", "lfoo"])
def test_parse_family_malformed(text):
    with pytest.raises(ValueError):
        nz.parse_family(text)


def test_sphere_point_examples():
    for fam in ["l1", "l2", "linf", "l1.5"]:
        np.testing.assert_array_equal(nz.sphere_point(nz.parse_family(fam), 0.0), [1.0, 0.0])
    np.testing.assert_allclose(nz.sphere_point(nz.l2(), math.pi / 4), [math.sqrt(0.5)] * 2, rtol=1e-15)
    u = nz.sphere_point(nz.linf(), math.pi / 4)
    np.testing.assert_allclose(u, [1.0, 1.0], rtol=1e-15)
    assert nz.eval_norm(nz.linf(), *u) == pytest.approx(1.0, abs=1e-15)


def test_sphere_point_rejects_out_of_range():
    with pytest.raises(InvalidArgument):
        nz.sphere_point(nz.l2(), 2.0)


@pytest.mark.parametrize(
    "fam, expected",
    [("l2", (1.0, 1.0)), ("linf", (math.sqrt(0.5), 1.0)), ("l1", (1.0, math.sqrt(2.0)))],
)
def test_extremal_constants_analytic(fam, expected):
    m, M = nz.extremal_constants(nz.parse_family(fam))
    assert m == pytest.approx(expected[0], abs=1e-8)
    assert M == pytest.approx(expected[1], abs=1e-8)


def _dense_pair_lipschitz(Z, n=1500):
    # Independent oracle: sup over all pairs of a uniform grid.
    t = np.linspace(0.0, math.pi / 2, n)
    u = nz.sphere_point(Z, t)
    d = np.linalg.norm(u[:, None, :] - u[None, :, :], axis=-1)
    dt = np.abs(t[:, None] - t[None, :])
    mask = dt > 0
    return float(np.max(d[mask] / dt[mask]))


@pytest.mark.parametrize("fam, analytic", [("l2", 1.0), ("linf", 2.0)])
def test_curve_lipschitz_against_pair_grid(fam, analytic):
    Z = nz.parse_family(fam)
    c = nz.curve_lipschitz(Z)
    oracle = _dense_pair_lipschitz(Z)
    assert c == pytest.approx(oracle, rel=5e-3)
    assert c == pytest.approx(analytic, rel=5e-3)


def test_endpoint_chord_quotient_l2():
    u0, u1 = nz.sphere_point(nz.l2(), [0.0, math.pi / 2])
    q = np.linalg.norm(u1 - u0) / (math.pi / 2)
    assert q == pytest.approx(2 * math.sqrt(2) / math.pi, rel=1e-15)
    assert nz.curve_lipschitz(nz.l2()) >= q


@pytest.mark.parametrize("fam", ["l1", "l1.5", "l2", "l3", "linf"])
def test_norm_constants_in_range(fam):
    k = nz.norm_constants(nz.parse_family(fam))
    assert 2 / math.pi <= k.c_Z <= 4.0
    assert k.m_Z <= 1.0 <= k.M_Z
    d = k.to_dict()
    assert set(d) >= {"m_Z", "M_Z", "c_Z"}


def test_validate_lp_exact():
    rep = nz.validate_unconditional(nz.lp(1.5), samples=10_000, seed=0)
    assert rep.passed
    assert max(rep.worst.values()) <= 1e-12


def test_validate_tabulated_within_interpolation():
    Z = nz.tabulate_from(nz.lp(1.5), 512)
    rep = nz.validate_unconditional(Z, samples=5000, seed=1)
    assert rep.passed
    t = np.linspace(0, math.pi / 2, 2001)
    a, b = np.cos(t), np.sin(t)
    err = np.max(np.abs(Z(a, b) - nz.lp(1.5)(a, b)))
    assert err <= 1e-4


def test_validate_flags_sign_asymmetry():
    Z = nz.custom(lambda a, b: a - b, name="difference")
    rep = nz.validate_unconditional(Z, samples=500, seed=0)
    assert not rep.passed
    assert rep.failures


def test_tabulated_requires_endpoints():
    with pytest.raises(InvalidArgument):
        nz.tabulated([0.1, 1.0], [1.0, 1.0])


def test_from_json_tabulated_pairs():
    Z = nz.from_json("[[0, 1], [0.7853981633974483, 1], [1.5707963267948966, 1]]")
    assert nz.eval_norm(Z, 0.6, 0.8) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(InvalidArgument):
        nz.from_json('{"family": "l2"}')


def test_weighted_and_functionals():
    Z = nz.max_of_functionals([[1, 0], [0, 1], [0.5, 0.5]])
    assert nz.eval_norm(Z, 1, 1) == pytest.approx(1.0)
    W = nz.weighted_lp([1, 2], [0.5, 0.5])
    assert nz.eval_norm(W, 1, 0) == pytest.approx(1.0)


@given(families, finite, finite)
def test_property_sign_symmetry(fam, a, b):
    Z = nz.parse_family(fam)
    v = Z(a, b)
    for sa, sb in [(-1, 1), (1, -1), (-1, -1)]:
        assert Z(sa * a, sb * b) == v


@given(families, finite, finite, finite, finite)
def test_property_triangle(fam, a, b, c, d):
    Z = nz.parse_family(fam)
    lhs = Z(a + c, b + d)
    rhs = Z(a, b) + Z(c, d)
    assert lhs <= rhs * (1 + 1e-12) + 1e-300


@given(families, finite, finite, st.floats(-1e3, 1e3, allow_nan=False))
def test_property_homogeneity(fam, a, b, lam):
    Z = nz.parse_family(fam)
    assert Z(lam * a, lam * b) == pytest.approx(abs(lam) * Z(a, b), rel=1e-12, abs=1e-300)


@given(families, st.floats(0.0, math.pi / 2))
def test_property_sphere_point_unit(fam, tau):
    Z = nz.parse_family(fam)
    u = nz.sphere_point(Z, tau)
    assert Z(u[0], u[1]) == pytest.approx(1.0, abs=1e-12)
