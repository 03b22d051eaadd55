import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spiralbend import invariance as iv
from spiralbend import norms2d as nz
from spiralbend.errors import InvalidArgument, InvalidParameter, NotInvariant

CROSS_DEFECT_SEED0 = 0.4071956909627885


def _cross_symmetrized(y1, y2):
    # Orbit sup of max(|u|, |v|, |u1 + v1|/sqrt2): rotations align both first coordinates.
    a, b = np.linalg.norm(y1), np.linalg.norm(y2)
    return max(a, b, (a + b) / math.sqrt(2.0))


@pytest.mark.parametrize("fam", ["l1", "l1.5", "l2", "l3", "linf"])
def test_direct_sums_are_invariant(fam):
    S = iv.direct_sum_space(nz.parse_family(fam), 2, 3)
    d = iv.invariance_defect(S, samples=4000, seed=0)
    assert d.eps <= 1e-10


def test_cross_term_defect_positive():
    S = iv.cross_term_space()
    d = iv.invariance_defect(S, samples=20_000, seed=0)
    assert 0.3 < d.eps <= math.sqrt(2.0) - 1.0 + 1e-12
    assert d.eps == pytest.approx(CROSS_DEFECT_SEED0, rel=1e-9)


def test_defect_independent_of_threads():
    S = iv.cross_term_space()
    a = iv.invariance_defect(S, samples=3000, seed=5, threads=1).to_dict()
    b = iv.invariance_defect(S, samples=3000, seed=5, threads=4).to_dict()
    assert a == b


def test_symmetrize_examples(rng):
    S = iv.direct_sum_space(nz.lp(1.5), 2, 2)
    y1, y2 = rng.standard_normal(2), rng.standard_normal(2)
    assert iv.symmetrize_norm(S, y1, y2, samples=500) == pytest.approx(float(S(y1, y2)), rel=1e-14)
    C = iv.cross_term_space()
    assert iv.symmetrize_norm(C, y1, np.zeros(2), samples=500) == pytest.approx(np.linalg.norm(y1), rel=1e-14)


def test_symmetrize_cross_term_sandwich(rng):
    S = iv.cross_term_space()
    d = iv.invariance_defect(S, samples=5000, seed=0)
    for _ in range(100):
        y1, y2 = rng.standard_normal(2), rng.standard_normal(2)
        base = float(S(y1, y2))
        sym = iv.symmetrize_norm(S, y1, y2, samples=1000, refine_steps=50)
        assert base <= sym <= d.max_ratio * base * (1 + 1e-12)
        assert sym == pytest.approx(_cross_symmetrized(y1, y2), rel=1e-5)


def test_symmetrize_monotone_in_samples(rng):
    S = iv.cross_term_space()
    y1, y2 = rng.standard_normal(2), rng.standard_normal(2)
    vals = [iv.symmetrize_norm(S, y1, y2, samples=n, refine=False) for n in (1000, 2000, 5000)]
    assert vals == sorted(vals)


def test_symmetrize_dimension_check():
    with pytest.raises(InvalidArgument):
        iv.symmetrize_norm(iv.cross_term_space(), np.ones(3), np.ones(2))


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0])
def test_extract_recovers_lp_on_grid(p):
    S = iv.direct_sum_space(nz.lp(p), 2, 2)
    Z = iv.extract_Z(S, grid=256)
    t = np.linspace(0.0, math.pi / 2, 256)
    t[-1] = math.pi / 2
    err = np.abs(Z(np.cos(t), np.sin(t)) - nz.lp(p)(np.cos(t), np.sin(t)))
    assert err.max() <= 1e-9


def test_extract_l2_is_l2():
    Z = iv.extract_Z(iv.direct_sum_space(nz.l2(), 3, 2))
    t = np.linspace(0, math.pi / 2, 999)
    np.testing.assert_allclose(Z(np.cos(t), np.sin(t)), 1.0, atol=1e-12)


def test_extract_independent_of_unit_vectors(rng):
    S = iv.direct_sum_space(nz.lp(1.5), 3, 3)
    u = [rng.standard_normal(3) for _ in range(4)]
    u = [x / np.linalg.norm(x) for x in u]
    Za = iv.extract_Z(S, u1=u[0], u2=u[1])
    Zb = iv.extract_Z(S, u1=u[2], u2=u[3])
    t = np.linspace(0, math.pi / 2, 300)
    diff = np.abs(Za(np.cos(t), np.sin(t)) - Zb(np.cos(t), np.sin(t)))
    assert diff.max() <= 2 * Za.params["defect"] + 1e-12


def test_extract_refuses_non_invariant():
    with pytest.raises(NotInvariant) as exc:
        iv.extract_Z(iv.cross_term_space(), defect_samples=2000)
    assert exc.value.defect > 0.1


def test_net_to_every_examples():
    lo, hi = iv.net_to_every_bounds(0.01, 1.0)
    assert lo == pytest.approx(0.94109, abs=1e-5)
    assert hi == pytest.approx(1.06111, abs=1e-5)
    lo, hi = iv.net_to_every_bounds(1e-9, 1.0)
    assert lo == pytest.approx(1.0, abs=1e-7) and hi == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(InvalidParameter):
        iv.net_to_every_bounds(0.5, 2.0)
    with pytest.raises(InvalidArgument):
        iv.net_to_every_bounds(0.0, 1.0)


def test_net_defect_bounded_by_bracket():
    S = iv.direct_sum_space(nz.lp(1.5), 2, 2)
    net, alpha = iv.circle_net(64)
    assert alpha == pytest.approx(2 * math.sin(math.pi / 128))
    assert iv.net_defect(S, net, net, samples=3000) <= 1e-12
    assert iv.projection_bound(S) == 1.0


def test_gordon_examples():
    g = iv.gordon_dimension(math.exp(8), delta=0.5)
    assert g.value == 2
    g2 = iv.gordon_dimension(log_N=32.0, delta=0.5, iterations=2)
    assert g2.trajectory == [8, 0]
    assert g2.first_below_one == 2
    assert "not a certified" in g2.label


def test_gordon_ladder_monotone():
    vals = [iv.gordon_dimension(log_N=2.0**k, delta=0.5).value for k in range(4, 21)]
    assert vals == sorted(vals)
    assert vals[-1] > vals[0]


def test_givens_product_orthogonal(rng):
    Q, angles, reflect = iv.random_orthogonal(4, 50, rng)
    eye = np.einsum("kij,kil->kjl", Q, Q)
    np.testing.assert_allclose(eye, np.broadcast_to(np.eye(4), eye.shape), atol=1e-13)
    np.testing.assert_allclose(iv.givens_product(angles, reflect, 4), Q, atol=1e-15)
    assert angles.shape[1] == iv.givens_count(4) == 6


@given(st.sampled_from(["l1", "l2", "l3", "linf"]), st.integers(0, 2**31))
def test_property_direct_sum_orbit_constant(fam, seed):
    r = np.random.default_rng(seed)
    S = iv.direct_sum_space(nz.parse_family(fam), 3, 2)
    y1, y2 = r.standard_normal(3), r.standard_normal(2)
    O1, _, _ = iv.random_orthogonal(3, 1, r)
    O2, _, _ = iv.random_orthogonal(2, 1, r)
    assert float(S(O1[0] @ y1, O2[0] @ y2)) == pytest.approx(float(S(y1, y2)), rel=1e-13)


@given(st.floats(1e-6, 0.05), st.floats(1.0, 3.0))
def test_property_net_bracket_contains_one(alpha, A):
    lo, hi = iv.net_to_every_bounds(alpha, A)
    assert 0 < lo <= 1.0 <= hi
