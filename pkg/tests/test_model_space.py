import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spiralbend import model_space as ms
from spiralbend import norms2d as nz
from spiralbend.errors import InvalidArgument

vec = arrays(np.float64, 3, elements=st.floats(-100, 100, allow_nan=False))


def test_direct_sum_examples():
    D = ms.DirectSum(nz.l2(), 2, 2)
    assert ms.direct_sum_norm(D, [3, 0], [0, 4]) == pytest.approx(5.0, rel=1e-15)
    D_inf = ms.DirectSum(nz.linf(), 2, 2)
    assert ms.direct_sum_norm(D_inf, [1, 0], [0, 1]) == 1.0
    for fam in ["l1", "l1.5", "linf"]:
        D = ms.DirectSum(nz.parse_family(fam), 3, 2)
        assert ms.direct_sum_norm(D, [1, 2, 2], [0, 0]) == pytest.approx(3.0, rel=1e-15)


def test_direct_sum_dimension_mismatch():
    with pytest.raises(InvalidArgument):
        ms.DirectSum(nz.l2(), 2, 2).norm(np.ones(3), np.ones(2))


def test_projection_ratio_at_most_one():
    D = ms.DirectSum(nz.lp(1.5), 2, 3)
    assert ms.projection_norm_ratio(D, samples=20_000, seed=0) <= 1.0 + 1e-12


def test_model_space_block_examples():
    M = ms.model_space(2, 3, [nz.l1(), nz.l2()])
    u = np.array([1.0, 2.0, 2.0])
    v = np.array([0.0, 3.0, 4.0])
    x = M.zeros()
    x[0], x[1] = u, v
    assert ms.model_norm(M, x) == pytest.approx(3.0 + 5.0, rel=1e-15)
    y = M.zeros()
    y[1], y[2] = u, v
    assert ms.model_norm(M, y) == pytest.approx(math.hypot(3.0, 5.0), rel=1e-15)
    z = M.zeros()
    z[3] = v
    assert ms.model_norm(M, z) == pytest.approx(5.0, rel=1e-15)


def test_model_space_shape_check():
    M = ms.model_space(1, 2)
    with pytest.raises(InvalidArgument):
        M.norm(np.zeros((3, 2)))


def test_max_renorm_euclidean_slots():
    x1 = np.array([3.0, 0.0, 0.0, 0.0])
    x2 = np.array([0.0, 0.0, 4.0, 0.0])
    e = ms.euclidean_rows
    assert float(ms.max_renorm(x1, x2, e, e)) == pytest.approx(5.0, rel=1e-15)
    tilde = lambda x: 1.05 * e(x)
    assert float(ms.max_renorm(x1, 0 * x2, e, tilde)) == pytest.approx(max(1.05 * 3.0, 3.0))


def test_max_renorm_sandwich(rng):
    gamma = 0.1
    e = ms.euclidean_rows

    def tilde(x):
        return np.maximum(e(x), (1 + gamma) * np.abs(x[..., 0]))

    x1 = np.zeros((10_000, 4))
    x2 = np.zeros((10_000, 4))
    x1[:, :2] = rng.standard_normal((10_000, 2))
    x2[:, 2:] = rng.standard_normal((10_000, 2))
    N = ms.max_renorm(x1, x2, e, tilde)
    base = e(x1 + x2)
    assert np.all(base <= N)
    assert np.all(N <= (1 + gamma) ** 2 * base)


def test_subspace_validation():
    with pytest.raises(InvalidArgument):
        ms.Subspace(np.array([[1.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InvalidArgument):
        ms.Subspace.from_vectors(np.array([[1.0, 2.0], [1.0, 2.0], [0, 0]]))


def test_opening_examples():
    U = ms.Subspace.coordinate(4, [0, 1])
    W = ms.Subspace.coordinate(4, [2, 3])
    assert ms.spherical_opening(U, U) == pytest.approx(0.0, abs=1e-12)
    assert ms.spherical_opening(U, W) == pytest.approx(math.sqrt(2.0), rel=1e-14)


@pytest.mark.parametrize("theta", [0.1, 0.5, 1.0])
def test_opening_tilted_against_grid(theta):
    U = ms.Subspace.coordinate(4, [0, 1])
    F = np.zeros((4, 2))
    F[0, 0], F[2, 0], F[1, 1] = math.cos(theta), math.sin(theta), 1.0
    W = ms.Subspace(F)
    exact = 2 * math.sin(theta / 2)
    assert ms.spherical_opening(U, W) == pytest.approx(exact, rel=1e-12)
    assert ms.spherical_opening_grid(U, W, steps=720) == pytest.approx(exact, rel=1e-4)


def test_principal_angles():
    U = ms.Subspace.coordinate(3, [0, 1])
    W = ms.Subspace.coordinate(3, [1, 2])
    np.testing.assert_allclose(np.sort(ms.principal_angles(U, W)), [0.0, math.pi / 2], atol=1e-12)


@given(st.integers(0, 10_000))
def test_property_opening_symmetric_and_bounded(seed):
    r = np.random.default_rng(seed)
    U = ms.Subspace.from_vectors(r.standard_normal((4, 2)))
    W = ms.Subspace.from_vectors(r.standard_normal((4, 2)))
    a, b = ms.spherical_opening(U, W), ms.spherical_opening(W, U)
    assert a == pytest.approx(b, abs=1e-12)
    assert 0.0 <= a <= math.sqrt(2.0) + 1e-12


@given(vec, vec, st.sampled_from(["l1", "l2", "linf", "l3"]))
def test_property_direct_sum_triangle(u, v, fam):
    D = ms.DirectSum(nz.parse_family(fam), 3, 3)
    w = np.concatenate([u, v])
    z = np.concatenate([v, u])
    assert D.joint_norm(w + z) <= (D.joint_norm(w) + D.joint_norm(z)) * (1 + 1e-12) + 1e-12
