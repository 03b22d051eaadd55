"""Invariance of direct sums of Euclidean spaces under orthogonal maps.

A norm on ``Y_1 (+) Y_2`` (both Euclidean) is eps-invariant when
``(1 - eps) ||y1 + y2|| <= ||O1 y1 + O2 y2|| <= (1 + eps) ||y1 + y2||`` for
all orthogonal ``O1, O2``.  Norms of the form ``Z(||y1||, ||y2||)`` are
0-invariant and conversely a 0-invariant norm determines such a ``Z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidArgument, InvalidParameter, NotInvariant
from .harness import chunk_rng, jsonable, run_chunks
from .model_space import euclidean_rows
from .norms2d import HALF_PI, UncondNorm2, tabulated

MAX_SUMMAND_DIM = 6
_CHUNK = 1000


@dataclass(frozen=True)
class PairedSpace:
    """Norm oracle on ``R^(n1 + n2)``; rows are concatenated ``(y1, y2)``."""

    n1: int
    n2: int
    norm: Callable = field(repr=False)
    name: str = "paired"

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise InvalidArgument("summand dimensions must be positive")

    def __call__(self, y1, y2):
        return self.norm(np.concatenate([np.asarray(y1, float), np.asarray(y2, float)], axis=-1))

    def summand_deviation(self, samples: int = 1000, seed: int = 0) -> float:
        """Largest relative gap between the norm and l_2 on either summand."""
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((samples, self.n1))
        b = rng.standard_normal((samples, self.n2))
        za = np.zeros((samples, self.n2))
        zb = np.zeros((samples, self.n1))
        d1 = np.abs(self(a, za) - euclidean_rows(a)) / euclidean_rows(a)
        d2 = np.abs(self(zb, b) - euclidean_rows(b)) / euclidean_rows(b)
        return float(max(d1.max(), d2.max()))


def direct_sum_space(Z: UncondNorm2, n1: int, n2: int) -> PairedSpace:
    def norm(w):
        w = np.asarray(w, dtype=float)
        return Z(euclidean_rows(w[..., :n1]), euclidean_rows(w[..., n1:]))

    return PairedSpace(n1, n2, norm, name=f"direct-sum[{Z.name or Z.family}]")


def cross_term_space(n1: int = 2, n2: int = 2, weight: float = 1.0 / math.sqrt(2.0)) -> PairedSpace:
    """``max(||u||, ||v||, weight |u_1 + v_1|)``; not invariant for ``weight > 1/2``."""
    if not (0 < weight <= 1):
        raise InvalidArgument("weight must lie in (0, 1] to keep the summands Euclidean")

    def norm(w):
        w = np.asarray(w, dtype=float)
        u = w[..., :n1]
        v = w[..., n1:]
        return np.maximum(
            np.maximum(euclidean_rows(u), euclidean_rows(v)), weight * np.abs(u[..., 0] + v[..., 0])
        )

    return PairedSpace(n1, n2, norm, name="cross-term")


# ---------------------------------------------------------------- orthogonal sampling


def givens_count(n: int) -> int:
    return n * (n - 1) // 2


def givens_product(angles: np.ndarray, reflect: np.ndarray, n: int) -> np.ndarray:
    """Batch of orthogonal matrices ``D * G_1 ... G_K`` from Givens angles.

    ``angles`` has shape ``(m, n(n-1)/2)``; ``reflect`` flips the sign of
    the first row, reaching the determinant -1 component.
    """
    angles = np.asarray(angles, dtype=float)
    m = angles.shape[0]
    Q = np.broadcast_to(np.eye(n), (m, n, n)).copy()
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            c = np.cos(angles[:, k])[:, None]
            s = np.sin(angles[:, k])[:, None]
            qi = Q[:, :, i].copy()
            qj = Q[:, :, j].copy()
            Q[:, :, i] = c * qi - s * qj
            Q[:, :, j] = s * qi + c * qj
            k += 1
    Q[np.asarray(reflect, bool), 0, :] *= -1.0
    return Q


def random_orthogonal(n: int, m: int, rng: np.random.Generator):
    """``m`` seeded orthogonal ``n x n`` matrices with their parameters."""
    angles = rng.uniform(0.0, 2.0 * math.pi, (m, givens_count(n)))
    reflect = rng.integers(0, 2, m).astype(bool)
    return givens_product(angles, reflect, n), angles, reflect


def _unit_rows(rng, m, n):
    g = rng.standard_normal((m, n))
    return g / euclidean_rows(g)[:, None]


def _draw_chunk(S: PairedSpace, rng):
    y1 = _unit_rows(rng, _CHUNK, S.n1)
    y2 = _unit_rows(rng, _CHUNK, S.n2)
    phi = rng.uniform(0.0, HALF_PI, _CHUNK)
    y1 = y1 * np.cos(phi)[:, None]
    y2 = y2 * np.sin(phi)[:, None]
    O1, a1, f1 = random_orthogonal(S.n1, _CHUNK, rng)
    O2, a2, f2 = random_orthogonal(S.n2, _CHUNK, rng)
    return y1, y2, O1, a1, f1, O2, a2, f2


def _apply(O, y):
    return np.einsum("mij,mj->mi", O, y)


# ---------------------------------------------------------------- defect


@dataclass
class InvarianceDefect:
    eps: float
    min_ratio: float
    max_ratio: float
    samples: int
    refine_steps: int
    seed: int
    worst: dict

    def to_dict(self) -> dict:
        return jsonable(
            {
                "eps": self.eps,
                "min_ratio": self.min_ratio,
                "max_ratio": self.max_ratio,
                "samples": self.samples,
                "refine_steps": self.refine_steps,
                "seed": self.seed,
                "worst": self.worst,
            }
        )


def _deviation(ratio):
    return np.maximum(ratio - 1.0, 1.0 - ratio)


def _refine(objective, start: np.ndarray, rng, steps: int, step: float = 0.2):
    """Random local search maximizing ``objective`` from ``start``."""
    best = start.copy()
    best_v = objective(best[None, :])[0]
    fails = 0
    for _ in range(steps):
        cand = best[None, :] + step * rng.standard_normal((8, best.size))
        vals = objective(cand)
        k = int(np.argmax(vals))
        if vals[k] > best_v:
            best, best_v = cand[k], vals[k]
            fails = 0
        else:
            fails += 1
            if fails >= 3:
                step *= 0.5
                fails = 0
        if step < 1e-10:
            break
    return best, best_v


def invariance_defect(
    S: PairedSpace, samples: int = 20_000, seed: int = 0, refine_steps: int = 200, threads: int | None = None
) -> InvarianceDefect:
    """Monte Carlo estimate of the least eps for which ``S`` is eps-invariant."""
    if max(S.n1, S.n2) > MAX_SUMMAND_DIM:
        raise InvalidArgument(f"summand dimensions above {MAX_SUMMAND_DIM} are not supported")
    if samples < 1:
        raise InvalidArgument("samples must be >= 1")
    n_chunks = -(-samples // _CHUNK)

    def work(idx):
        rng = chunk_rng(seed, idx)
        y1, y2, O1, a1, f1, O2, a2, f2 = _draw_chunk(S, rng)
        keep = min(_CHUNK, samples - idx * _CHUNK)
        base = S(y1, y2)
        ratio = S(_apply(O1, y1), _apply(O2, y2)) / base
        ratio = ratio[:keep]
        k = int(np.argmax(_deviation(ratio)))
        worst = {
            "y1": y1[k],
            "y2": y2[k],
            "angles1": a1[k],
            "angles2": a2[k],
            "reflect1": bool(f1[k]),
            "reflect2": bool(f2[k]),
        }
        return float(ratio.min()), float(ratio.max()), float(_deviation(ratio)[k]), worst

    results = run_chunks(work, list(range(n_chunks)), threads)
    lo = min(r[0] for r in results)
    hi = max(r[1] for r in results)
    k = int(np.argmax([r[2] for r in results]))
    worst = results[k][3]
    k1 = givens_count(S.n1)
    y1, y2 = worst["y1"][None, :], worst["y2"][None, :]
    base = S(y1, y2)[0]

    def objective(theta):
        O1 = givens_product(theta[:, :k1], np.full(len(theta), worst["reflect1"]), S.n1)
        O2 = givens_product(theta[:, k1:], np.full(len(theta), worst["reflect2"]), S.n2)
        r = S(_apply(O1, np.repeat(y1, len(theta), 0)), _apply(O2, np.repeat(y2, len(theta), 0))) / base
        return _deviation(r)

    start = np.concatenate([worst["angles1"], worst["angles2"]])
    if start.size and refine_steps > 0:
        best, _ = _refine(objective, start, chunk_rng(seed, 10**9), refine_steps)
        O1 = givens_product(best[None, :k1], np.array([worst["reflect1"]]), S.n1)
        O2 = givens_product(best[None, k1:], np.array([worst["reflect2"]]), S.n2)
        r = float(S(_apply(O1, y1), _apply(O2, y2))[0] / base)
        lo, hi = min(lo, r), max(hi, r)
        worst["angles1"], worst["angles2"] = best[:k1], best[k1:]
        worst["ratio"] = r
    eps = max(hi - 1.0, 1.0 - lo, 0.0)
    return InvarianceDefect(eps, lo, hi, int(samples), int(refine_steps), int(seed), jsonable(worst))


def symmetrize_norm(
    S: PairedSpace,
    y1,
    y2,
    samples: int = 2000,
    seed: int = 0,
    refine: bool = True,
    refine_steps: int = 200,
) -> float:
    """Sup of ``||O1 y1 + O2 y2||`` over sampled (and refined) orthogonal pairs.

    The identity pair is always included.  Samples are drawn in fixed-size
    blocks so a larger ``samples`` extends, never replaces, a smaller run.
    """
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    if y1.shape != (S.n1,) or y2.shape != (S.n2,):
        raise InvalidArgument("vectors do not match the summand dimensions")
    best = float(S(y1[None, :], y2[None, :])[0])
    best_params = None
    n_chunks = -(-samples // _CHUNK)
    for idx in range(n_chunks):
        rng = chunk_rng(seed, idx)
        O1, a1, f1 = random_orthogonal(S.n1, _CHUNK, rng)
        O2, a2, f2 = random_orthogonal(S.n2, _CHUNK, rng)
        keep = min(_CHUNK, samples - idx * _CHUNK)
        vals = S(O1[:keep] @ y1, O2[:keep] @ y2)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best = float(vals[k])
            best_params = (a1[k], a2[k], f1[k], f2[k])
    if refine and best_params is not None and refine_steps > 0:
        a1, a2, f1, f2 = best_params
        k1 = a1.size

        def objective(theta):
            O1 = givens_product(theta[:, :k1], np.full(len(theta), f1), S.n1)
            O2 = givens_product(theta[:, k1:], np.full(len(theta), f2), S.n2)
            return S(O1 @ y1, O2 @ y2)

        start = np.concatenate([a1, a2])
        if start.size:
            _, v = _refine(objective, start, chunk_rng(seed, 10**9 + 1), refine_steps)
            best = max(best, float(v))
    return best


# ---------------------------------------------------------------- extraction


def extract_Z(
    S: PairedSpace,
    grid: int = 256,
    tolerance: float = 1e-6,
    defect_samples: int = 4000,
    seed: int = 0,
    u1=None,
    u2=None,
) -> UncondNorm2:
    """Recover ``Z(a1, a2) = ||a1 u1 + a2 u2||`` as a tabulated norm.

    Refuses (raising :class:`NotInvariant`) when the measured defect exceeds
    ``tolerance``.  ``u1``, ``u2`` default to the first basis vector of each
    summand.
    """
    if grid < 2:
        raise InvalidArgument("grid must have at least two nodes")
    defect = invariance_defect(S, defect_samples, seed)
    if defect.eps > tolerance:
        raise NotInvariant(f"measured invariance defect {defect.eps:.3e} exceeds {tolerance:.1e}", defect.eps)
    u1 = np.eye(S.n1)[0] if u1 is None else np.asarray(u1, dtype=float)
    u2 = np.eye(S.n2)[0] if u2 is None else np.asarray(u2, dtype=float)
    u1 = u1 / np.linalg.norm(u1)
    u2 = u2 / np.linalg.norm(u2)
    th = np.linspace(0.0, HALF_PI, grid)
    th[-1] = HALF_PI
    c = np.where(th == HALF_PI, 0.0, np.cos(th))
    s = np.where(th == 0.0, 0.0, np.sin(th))
    vals = S(c[:, None] * u1, s[:, None] * u2)
    Z = tabulated(th, 1.0 / vals)
    Z.params["defect"] = defect.eps
    Z.params["source"] = S.name
    return Z


# ---------------------------------------------------------------- net transfer


def net_to_every_bounds(alpha: float, A: float) -> tuple:
    """``((1 - alpha(1 + (2 - alpha)A))^2, (1 + alpha(1 + (2 + alpha)A))^2)``."""
    if not (0.0 < alpha < 1.0):
        raise InvalidArgument("alpha must lie in (0, 1)")
    if not A >= 1.0:
        raise InvalidArgument("A must be >= 1")
    low = 1.0 - alpha * (1.0 + (2.0 - alpha) * A)
    if not low > 0:
        raise InvalidParameter(f"positivity proviso fails: 1 - alpha(1 + (2 - alpha)A) = {low}")
    high = 1.0 + alpha * (1.0 + (2.0 + alpha) * A)
    return low * low, high * high


def circle_net(count: int, frame=None) -> tuple:
    """Equally spaced points on a unit circle and their covering fineness."""
    phi = np.arange(count) * (2.0 * math.pi / count)
    pts = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    if frame is not None:
        pts = pts @ np.asarray(frame, float).T
    return pts, 2.0 * math.sin(math.pi / (2.0 * count))


def net_defect(S: PairedSpace, net1, net2, samples: int = 5000, seed: int = 0) -> float:
    """Largest deviation when one summand ranges over a net and only the other rotates."""
    rng = np.random.default_rng(seed)
    net1 = np.asarray(net1, float)
    net2 = np.asarray(net2, float)
    worst = 0.0
    for fixed_second in (True, False):
        net = net2 if fixed_second else net1
        n_free = S.n1 if fixed_second else S.n2
        z = net[rng.integers(0, len(net), samples)] * rng.uniform(0.05, 1.0, samples)[:, None]
        y = _unit_rows(rng, samples, n_free)
        O, _, _ = random_orthogonal(n_free, samples, rng)
        if fixed_second:
            ratio = S(_apply(O, y), z) / S(y, z)
        else:
            ratio = S(z, _apply(O, y)) / S(z, y)
        worst = max(worst, float(_deviation(ratio).max()))
    return worst


def projection_bound(S: PairedSpace, samples: int = 20_000, seed: int = 0) -> float:
    """Sampled ``max(||P_1||, ||P_2||)`` for the coordinate projections."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((samples, S.n1))
    b = rng.standard_normal((samples, S.n2)) * rng.uniform(0, 3, (samples, 1))
    full = S(a, b)
    return float(max(np.max(euclidean_rows(a) / full), np.max(euclidean_rows(b) / full), 1.0))


# ---------------------------------------------------------------- dimension calculator


@dataclass
class GordonResult:
    value: int
    trajectory: list
    first_below_one: int | None
    delta: float
    sigma: float
    beta: float
    label: str = "planning estimate (constants unspecified), not a certified dimension"

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def gordon_dimension(
    N: float | None = None,
    delta: float = 0.5,
    sigma: float = 1.0,
    beta: float = 1.0,
    iterations: int = 1,
    log_N: float | None = None,
) -> GordonResult:
    """Iterate ``g(N) = floor(delta^2 ln(sigma N) / beta)``.

    Pass ``log_N`` instead of ``N`` for huge arguments.  Iteration stops at
    the first value below 1, whose (1-based) index is reported.
    """
    if (N is None) == (log_N is None):
        raise InvalidArgument("give exactly one of N and log_N")
    if log_N is None:
        if not N >= 1:
            raise InvalidArgument("N must be >= 1")
        log_N = math.log(N)
    if not (0.0 < delta < 1.0):
        raise InvalidArgument("delta must lie in (0, 1)")
    if not (sigma > 0 and beta > 0):
        raise InvalidArgument("sigma and beta must be positive")
    if iterations < 1:
        raise InvalidArgument("iterations must be >= 1")
    trajectory = []
    current_log = float(log_N)
    first = None
    value = 0
    for k in range(1, iterations + 1):
        raw = delta * delta * (math.log(sigma) + current_log) / beta
        # Guard the floor against representation error such as 1.9999999999999998.
        value = int(math.floor(raw + 1e-12 * max(1.0, abs(raw))))
        trajectory.append(value)
        if value < 1:
            first = k
            break
        current_log = math.log(value)
    return GordonResult(value, trajectory, first, float(delta), float(sigma), float(beta))
