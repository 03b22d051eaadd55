"""Pairwise distortion measurement shared by the embedding pipelines."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgument
from .model_space import euclidean_rows

SCHEMA = "spiralbend/1"
THREADS_ENV = "SPIRALBEND_THREADS"
EXHAUSTIVE_LIMIT = 2000
CHUNK_PAIRS = 200_000


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_chunks(fn: Callable, items: Sequence, threads: int | None = None) -> list:
    """Map ``fn`` over ``items`` keeping input order.

    Chunking is decided by the caller and never depends on ``threads``, so
    results are identical for every thread count.
    """
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for chunk ``index`` of a seeded computation."""
    return np.random.default_rng([int(seed), int(index)])


def jsonable(obj):
    """Convert numpy scalars/arrays and non-finite floats into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


@dataclass
class DistortionReport:
    min_ratio: float
    max_ratio: float
    distortion: float
    argmin_pair: tuple
    argmax_pair: tuple
    pair_count: int
    seed: int | None
    exhaustive: bool

    @property
    def is_embedding(self) -> bool:
        return self.min_ratio > 0 and math.isfinite(self.distortion)

    def to_dict(self) -> dict:
        return jsonable(
            {
                "min_ratio": self.min_ratio,
                "max_ratio": self.max_ratio,
                "distortion": self.distortion,
                "argmin_pair": list(self.argmin_pair),
                "argmax_pair": list(self.argmax_pair),
                "pair_count": self.pair_count,
                "seed": self.seed,
                "exhaustive": self.exhaustive,
                "embedding": self.is_embedding,
            }
        )


def ratios_of(target: np.ndarray, source: np.ndarray) -> np.ndarray:
    """``target / source``, switching to log differences for huge magnitudes."""
    target = np.asarray(target, dtype=float)
    source = np.asarray(source, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = target / source
        huge = (target > 1e300) | (source > 1e300) | ~np.isfinite(out)
        if np.any(huge):
            out = np.where(huge, np.exp(np.log(target) - np.log(source)), out)
    return out


class _Accumulator:
    def __init__(self):
        self.lo = math.inf
        self.hi = -math.inf
        self.lo_pair = (-1, -1)
        self.hi_pair = (-1, -1)
        self.count = 0

    def add(self, r: np.ndarray, pairs: np.ndarray):
        if r.size == 0:
            return
        i = int(np.argmin(r))
        j = int(np.argmax(r))
        if r[i] < self.lo:
            self.lo, self.lo_pair = float(r[i]), tuple(int(v) for v in pairs[i])
        if r[j] > self.hi:
            self.hi, self.hi_pair = float(r[j]), tuple(int(v) for v in pairs[j])
        self.count += r.size

    def report(self, seed, exhaustive) -> DistortionReport:
        if self.lo > 0:
            dist = self.hi / self.lo
        else:
            dist = math.inf
        return DistortionReport(
            self.lo, self.hi, dist, self.lo_pair, self.hi_pair, self.count, seed, exhaustive
        )


def _pair_ratios(points, images, pairs, source_norm, target_norm):
    i, j = pairs[:, 0], pairs[:, 1]
    s = source_norm(points[i] - points[j])
    t = target_norm(images[i] - images[j])
    return ratios_of(t, s)


def _all_pairs(n: int):
    iu, ju = np.triu_indices(n, 1)
    return np.stack([iu, ju], axis=1)


def _sampled_pairs(n: int, count: int, seed: int, index: int):
    rng = chunk_rng(seed, index)
    i = rng.integers(0, n, count)
    j = rng.integers(0, n - 1, count)
    j = j + (j >= i)
    return np.stack([np.minimum(i, j), np.maximum(i, j)], axis=1)


def _prepare(points, images):
    P = np.asarray(points, dtype=float)
    Q = np.asarray(images, dtype=float)
    if P.ndim == 1:
        P = P[:, None]
    if Q.ndim == 1:
        Q = Q[:, None]
    if P.shape[0] != Q.shape[0]:
        raise InvalidArgument("points and images must have the same length")
    if P.shape[0] < 2:
        raise InvalidArgument("need at least two points")
    if not (np.all(np.isfinite(P)) and np.all(np.isfinite(Q))):
        raise InvalidArgument("points and images must be finite")
    flat = P.reshape(P.shape[0], -1)
    if np.unique(flat, axis=0).shape[0] != flat.shape[0]:
        raise InvalidArgument("duplicate source points: distance ratio undefined")
    return P, Q


def _flat_norm(x):
    x = np.asarray(x, dtype=float)
    return euclidean_rows(x.reshape(x.shape[0], -1))


def _ratio_chunks(points, images, source_norm, target_norm, mode, samples, seed, threads):
    source_norm = source_norm or _flat_norm
    target_norm = target_norm or _flat_norm
    P, Q = _prepare(points, images)
    n = P.shape[0]
    if mode == "auto":
        mode = "exhaustive" if n <= EXHAUSTIVE_LIMIT else "sample"
    if mode not in ("exhaustive", "sample"):
        raise InvalidArgument(f"unknown mode {mode!r}")
    if mode == "exhaustive":
        pairs = _all_pairs(n)
        chunks = [pairs[k : k + CHUNK_PAIRS] for k in range(0, len(pairs), CHUNK_PAIRS)]
        work = lambda ch: (_pair_ratios(P, Q, ch, source_norm, target_norm), ch)
    else:
        sizes = [min(CHUNK_PAIRS, samples - k) for k in range(0, samples, CHUNK_PAIRS)]
        chunks = list(enumerate(sizes))

        def work(item):
            idx, size = item
            ch = _sampled_pairs(n, size, seed, idx)
            return _pair_ratios(P, Q, ch, source_norm, target_norm), ch

    return mode, run_chunks(work, chunks, threads)


def pairwise_distortion(
    points,
    images,
    source_norm: Callable | None = None,
    target_norm: Callable | None = None,
    mode: str = "auto",
    samples: int = 1_000_000,
    seed: int = 0,
    threads: int | None = None,
) -> DistortionReport:
    """Min/max of ``||F(p) - F(q)|| / ||p - q||`` over point pairs.

    Norm callables take a batch of difference vectors (first axis indexes
    pairs) and return a 1-D array.  Both default to the Euclidean norm of
    the flattened difference.  ``mode`` is ``"auto"`` (exhaustive up to 2000
    points, seeded sampling above), ``"exhaustive"`` or ``"sample"``.
    """
    mode, results = _ratio_chunks(points, images, source_norm, target_norm, mode, samples, seed, threads)
    acc = _Accumulator()
    for r, ch in results:
        acc.add(r, ch)
    exhaustive = mode == "exhaustive"
    return acc.report(None if exhaustive else int(seed), exhaustive)


def isometry_defect(
    points,
    images,
    source_norm: Callable | None = None,
    target_norm: Callable | None = None,
    mode: str = "auto",
    samples: int = 1_000_000,
    seed: int = 0,
    threads: int | None = None,
) -> float:
    """``max |ratio - 1|`` over the same pairs :func:`pairwise_distortion` uses."""
    _, results = _ratio_chunks(points, images, source_norm, target_norm, mode, samples, seed, threads)
    return float(max(np.max(np.abs(r - 1.0)) for r, _ in results))
