import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spiralbend import harness as hs
from spiralbend.bending import make_bending
from spiralbend.norms2d import l2


def test_identity_and_scaling(rng):
    P = rng.standard_normal((60, 3))
    r = hs.pairwise_distortion(P, P, mode="exhaustive")
    assert r.distortion == 1.0
    assert r.pair_count == 60 * 59 // 2
    r2 = hs.pairwise_distortion(P, 2 * P, mode="exhaustive")
    assert r2.distortion == pytest.approx(1.0, abs=1e-14)
    assert r2.min_ratio == pytest.approx(2.0, rel=1e-14)


def test_isometry_defect_zero_cases(rng):
    P = rng.standard_normal((40, 2))
    assert hs.isometry_defect(P, P) == 0.0
    T = make_bending(0.2, 1.0, l2(), 2)
    inner = P / np.linalg.norm(P, axis=1, keepdims=True) * rng.uniform(0, 1, (40, 1))
    a, b = T.apply(inner)
    img = np.concatenate([a, b], axis=1)
    assert hs.isometry_defect(inner, img) == 0.0


def test_bending_images_within_bracket(rng):
    T = make_bending(0.1, 1.0, l2(), 2)
    t = np.exp(rng.uniform(-1, T.params.log_R + 1, 300))
    g = rng.standard_normal((300, 2))
    P = g / np.linalg.norm(g, axis=1, keepdims=True) * t[:, None]
    img = T.as_map()(P)
    norm = lambda d: l2()(np.linalg.norm(d[:, :2], axis=1), np.linalg.norm(d[:, 2:], axis=1))
    r = hs.pairwise_distortion(P, img, target_norm=norm, mode="exhaustive")
    assert r.distortion <= 1.1 / 0.9


def test_sampled_mode_reproducible(rng):
    P = rng.standard_normal((300, 3))
    Q = P * np.array([1.0, 2.0, 0.5])
    a = hs.pairwise_distortion(P, Q, mode="sample", samples=5000, seed=3, threads=1)
    b = hs.pairwise_distortion(P, Q, mode="sample", samples=5000, seed=3, threads=4)
    assert a.to_dict() == b.to_dict()


def test_run_chunks_order():
    out = hs.run_chunks(lambda x: x * x, list(range(20)), threads=4)
    assert out == [x * x for x in range(20)]


def test_chunk_rng_independent_of_order():
    a = hs.chunk_rng(5, 3).random(4)
    hs.chunk_rng(5, 2).random(100)
    b = hs.chunk_rng(5, 3).random(4)
    np.testing.assert_array_equal(a, b)


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv(hs.THREADS_ENV, "3")
    assert hs.default_threads() == 3
    monkeypatch.delenv(hs.THREADS_ENV)
    assert hs.default_threads() >= 1


def test_jsonable_converts_numpy():
    d = hs.jsonable({"a": np.float64(1.5), "b": np.arange(3), "c": (np.int64(2),)})
    assert d == {"a": 1.5, "b": [0, 1, 2], "c": [2]}


@given(st.integers(2, 30), st.integers(0, 1000))
def test_property_distortion_at_least_one(n, seed):
    r = np.random.default_rng(seed)
    P = r.standard_normal((n, 2))
    Q = r.standard_normal((n, 2))
    if np.min(np.linalg.norm(P[:, None] - P[None], axis=-1) + np.eye(n)) == 0:
        return
    rep = hs.pairwise_distortion(P, Q, mode="exhaustive")
    assert rep.distortion >= 1.0
    assert rep.min_ratio <= rep.max_ratio
