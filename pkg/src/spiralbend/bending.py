"""Bending maps ``Y -> Y (+)_Z Y`` along a logarithmic spiral.

For ``||x|| <= r`` the map is ``x -> (x, 0)``, for ``||x|| >= R`` it is
``x -> (0, x)`` and in between the angle ``tau = (eps / c) ln(||x|| / r)``
turns the point along the Z unit circle: ``x -> (c(x) x, s(x) x)`` with
``(c(x), s(x)) = u(tau)``.  The radii satisfy
``(eps / c) ln(R / r) = pi / 2`` and the map preserves norms exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument
from .harness import DistortionReport, chunk_rng, jsonable, run_chunks
from .model_space import euclidean_rows
from .norms2d import HALF_PI, LOWER_LIP, UPPER_LIP, UncondNorm2

LOG_DOMAIN_THRESHOLD = 300.0
_MAX_LOG = 700.0


def solve_outer_radius(eps: float, r: float, c: float = 4.0) -> tuple[float, float]:
    """Return ``(R, ln R)`` with ``R = r exp(pi c / (2 eps))``.

    ``R`` is ``inf`` when it overflows; ``ln R`` is always finite.
    """
    if not (0.0 < eps < 1.0):
        raise InvalidArgument("eps must lie in (0, 1)")
    if not (r > 0.0 and math.isfinite(r)):
        raise InvalidArgument("r must be positive and finite")
    if not (LOWER_LIP - 1e-15 <= c <= UPPER_LIP):
        raise InvalidArgument("c must lie in [2/pi, 4]")
    log_R = math.log(r) + math.pi * c / (2.0 * eps)
    R = math.exp(log_R) if log_R < 709.0 else math.inf
    return R, log_R


@dataclass(frozen=True)
class BendingParams:
    eps: float
    r: float
    R: float
    log_r: float
    log_R: float
    c: float
    Z: UncondNorm2 = field(repr=False)
    dim: int

    def __post_init__(self):
        if not (self.log_r < self.log_R):
            raise InvalidArgument("inner radius must be smaller than the outer radius")
        if self.dim < 1:
            raise InvalidArgument("dim must be positive")
        lhs = self.eps / self.c * (self.log_R - self.log_r)
        if abs(lhs - HALF_PI) > 1e-12 * HALF_PI:
            raise InvalidArgument("radii do not satisfy (eps/c) ln(R/r) = pi/2")

    @property
    def log_domain(self) -> bool:
        return self.log_R > LOG_DOMAIN_THRESHOLD

    def to_dict(self) -> dict:
        return jsonable(
            {
                "eps": self.eps,
                "r": self.r,
                "R": self.R,
                "log_r": self.log_r,
                "log_R": self.log_R,
                "c": self.c,
                "dim": self.dim,
                "Z": self.Z.describe(),
            }
        )


def bending_params(eps: float, r: float, Z: UncondNorm2, dim: int, c: float = 4.0) -> BendingParams:
    R, log_R = solve_outer_radius(eps, r, c)
    return BendingParams(float(eps), float(r), R, math.log(r), log_R, float(c), Z, int(dim))


def params_from_log_radii(log_r: float, log_R: float, Z: UncondNorm2, dim: int, c: float = 4.0) -> BendingParams:
    """Bending whose budget ``eps`` is implied by given radii."""
    eps = c * HALF_PI / (log_R - log_r)
    r = math.exp(log_r) if log_r < 709.0 else math.inf
    R = math.exp(log_R) if log_R < 709.0 else math.inf
    return BendingParams(float(eps), r, R, float(log_r), float(log_R), float(c), Z, int(dim))


def tau(t, p: BendingParams):
    """Spiral angle ``(eps/c) ln(t/r)`` clamped to ``[0, pi/2]``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise InvalidArgument("t must be finite and nonnegative")
    with np.errstate(divide="ignore"):
        lt = np.log(t)
    out = np.clip(p.eps / p.c * (lt - p.log_r), 0.0, HALF_PI)
    out = np.where(t <= p.r, 0.0, out)
    out = np.where(t >= p.R, HALF_PI, out)
    return out if out.ndim else float(out)


def coefficients_from_radius(t, p: BendingParams):
    """``(c, s)`` for radii ``t``: (1, 0) inside, (0, 1) outside, ``u(tau)`` between."""
    t = np.asarray(t, dtype=float)
    inner = t <= p.r
    outer = t >= p.R
    ang = np.asarray(tau(t, p))
    cos = np.where(ang == HALF_PI, 0.0, np.cos(ang))
    sin = np.where(ang == 0.0, 0.0, np.sin(ang))
    z = p.Z(cos, sin)
    c = np.where(inner, 1.0, np.where(outer, 0.0, cos / z))
    s = np.where(inner, 0.0, np.where(outer, 1.0, sin / z))
    return c, s


def _as_batch(x, dim):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = x[None, :] if single else x
    if X.ndim != 2 or X.shape[1] != dim:
        raise InvalidArgument(f"expected vectors of dimension {dim}")
    return X, single


@dataclass(frozen=True)
class BendingMap:
    params: BendingParams

    @property
    def dim(self) -> int:
        return self.params.dim

    def coefficients(self, x):
        X, single = _as_batch(x, self.dim)
        c, s = coefficients_from_radius(euclidean_rows(X), self.params)
        return (float(c[0]), float(s[0])) if single else (c, s)

    def apply(self, x):
        X, single = _as_batch(x, self.dim)
        c, s = coefficients_from_radius(euclidean_rows(X), self.params)
        first = c[:, None] * X
        second = s[:, None] * X
        return (first[0], second[0]) if single else (first, second)

    def image_norm(self, first, second):
        return self.params.Z(euclidean_rows(first), euclidean_rows(second))

    def as_map(self):
        """The map as ``R^dim -> R^(2 dim)`` acting on row batches."""

        def T(x):
            a, b = self.apply(x)
            return np.concatenate([a, b], axis=-1)

        return T


def make_bending(eps: float, r: float, Z: UncondNorm2, dim: int, c: float = 4.0) -> BendingMap:
    return BendingMap(bending_params(eps, r, Z, dim, c))


def coefficients(x, p: BendingParams):
    return BendingMap(p).coefficients(x)


def apply(T: BendingMap, x):
    return T.apply(x)


def _directions(rng, m, dim):
    g = rng.standard_normal((m, dim))
    return g / euclidean_rows(g)[:, None]


def _radii(rng, lo, hi, m):
    return np.exp(rng.uniform(lo, hi, m))


def sample_pairs(p: BendingParams, m: int, rng: np.random.Generator, law: str = "mixed"):
    """Draw ``m`` point pairs for distortion checks.

    ``"log-uniform"`` draws independent radii log-uniformly in
    ``[r/10, 10R]``.  ``"mixed"`` splits the budget between independent
    pairs, close pairs (relative separation down to 1e-6) and pairs in thin
    shells around ``r`` and ``R``.
    """
    lo = p.log_r - math.log(10.0)
    hi = min(p.log_R + math.log(10.0), _MAX_LOG)
    dim = p.dim
    x = _directions(rng, m, dim) * _radii(rng, lo, hi, m)[:, None]
    y = _directions(rng, m, dim) * _radii(rng, lo, hi, m)[:, None]
    if law == "log-uniform":
        return x, y
    if law != "mixed":
        raise InvalidArgument(f"unknown radial law {law!r}")
    kind = rng.integers(0, 3, m)
    near = kind == 1
    shell = kind == 2
    sep = 10.0 ** rng.uniform(-6.0, 0.0, m)
    centers = np.where(rng.integers(0, 2, m) == 0, p.log_r, min(p.log_R, _MAX_LOG))
    shell_r = np.exp(centers + rng.uniform(-0.05, 0.05, m))
    shell_r2 = np.exp(centers + rng.uniform(-0.05, 0.05, m))
    x = np.where(shell[:, None], _directions(rng, m, dim) * shell_r[:, None], x)
    close = near | (shell & (rng.integers(0, 2, m) == 0))
    y_close = x + euclidean_rows(x)[:, None] * sep[:, None] * _directions(rng, m, dim)
    y_shell = _directions(rng, m, dim) * shell_r2[:, None]
    y = np.where(close[:, None], y_close, np.where(shell[:, None], y_shell, y))
    return x, y


@dataclass
class BendingReport:
    eps: float
    distortion: DistortionReport
    bracket_violations: int
    strong_bound_violations: int
    strong_bound_pairs: int
    norm_preservation: float
    tolerance: float
    law: str
    worst_violation: list | None = None

    @property
    def passed(self) -> bool:
        return (
            self.bracket_violations == 0
            and self.strong_bound_violations == 0
            and self.norm_preservation <= 1e-10
        )

    def to_dict(self) -> dict:
        return jsonable(
            {
                "eps": self.eps,
                "distortion": self.distortion.to_dict(),
                "bracket": [1.0 - self.eps, 1.0 + self.eps],
                "bracket_violations": self.bracket_violations,
                "strong_bound_violations": self.strong_bound_violations,
                "strong_bound_pairs": self.strong_bound_pairs,
                "norm_preservation": self.norm_preservation,
                "tolerance": self.tolerance,
                "law": self.law,
                "worst_violation": self.worst_violation,
                "passed": self.passed,
            }
        )


def _check_chunk(T: BendingMap, x, y, tol):
    p = T.params
    nx = euclidean_rows(x)
    ny = euclidean_rows(y)
    cx, sx = coefficients_from_radius(nx, p)
    cy, sy = coefficients_from_radius(ny, p)
    first = cx[:, None] * x - cy[:, None] * y
    second = sx[:, None] * x - sy[:, None] * y
    dist_image = p.Z(euclidean_rows(first), euclidean_rows(second))
    dist_source = euclidean_rows(x - y)
    keep = dist_source > 0
    ratio = dist_image[keep] / dist_source[keep]
    bad = (ratio < 1.0 - p.eps - tol) | (ratio > 1.0 + p.eps + tol)
    # Stronger form: Z(U(x) - U(y)) <= eps (|x| - |y|) / |y| for |x| >= |y| > 0.
    big = np.maximum(nx, ny)
    small = np.minimum(nx, ny)
    ok_pairs = small > 0
    lhs = p.Z(cx - cy, sx - sy)
    rhs = p.eps * (big - small) / np.where(ok_pairs, small, 1.0)
    strong_bad = ok_pairs & (lhs > rhs * (1.0 + 1e-9) + 1e-14)
    pres = np.concatenate(
        [
            np.abs(p.Z(cx * nx, sx * nx) - nx) / np.where(nx > 0, nx, 1.0),
            np.abs(p.Z(cy * ny, sy * ny) - ny) / np.where(ny > 0, ny, 1.0),
        ]
    )
    worst = None
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        worst = {"x": x[keep][k].tolist(), "y": y[keep][k].tolist(), "ratio": float(ratio[k])}
    return ratio, x[keep], y[keep], int(bad.sum()), int(strong_bad.sum()), int(ok_pairs.sum()), float(pres.max()), worst


def verify_distortion(
    T: BendingMap,
    pairs: int = 100_000,
    seed: int = 0,
    law: str = "mixed",
    tol: float = 1e-9,
    threads: int | None = None,
    chunk: int = 25_000,
) -> BendingReport:
    """Sample point pairs and check the distortion bracket and the stronger bound."""
    if pairs < 1:
        raise InvalidArgument("pairs must be >= 1")
    p = T.params
    sizes = [(i, min(chunk, pairs - k)) for i, k in enumerate(range(0, pairs, chunk))]

    def work(item):
        idx, m = item
        x, y = sample_pairs(p, m, chunk_rng(seed, idx), law)
        return _check_chunk(T, x, y, tol)

    results = run_chunks(work, sizes, threads)
    lo, hi = math.inf, -math.inf
    lo_pair = hi_pair = ()
    count = bad = strong = strong_pairs = 0
    pres = 0.0
    worst = None
    for ratio, xs, ys, b, sb, sp, pr, w in results:
        count += ratio.size
        bad += b
        strong += sb
        strong_pairs += sp
        pres = max(pres, pr)
        if worst is None and w is not None:
            worst = w
        if ratio.size:
            i, j = int(np.argmin(ratio)), int(np.argmax(ratio))
            if ratio[i] < lo:
                lo, lo_pair = float(ratio[i]), (xs[i].tolist(), ys[i].tolist())
            if ratio[j] > hi:
                hi, hi_pair = float(ratio[j]), (xs[j].tolist(), ys[j].tolist())
    dist = hi / lo if lo > 0 else math.inf
    report = DistortionReport(lo, hi, dist, lo_pair, hi_pair, count, int(seed), False)
    return BendingReport(float(p.eps), report, bad, strong, strong_pairs, pres, tol, law, worst)


def check_regimes(T: BendingMap, r1: float, R1: float, samples: int = 1000, seed: int = 0) -> dict:
    """Check the exact inner/outer regimes against radii ``r1 <= r`` and ``R1 >= R``.

    Returns counts of samples whose image is not bit-identical to ``(x, 0)``
    inside ``r1`` or ``(0, x)`` outside ``R1``.
    """
    rng = np.random.default_rng(seed)
    d = T.dim
    inner = _directions(rng, samples, d) * (r1 * rng.uniform(0.0, 1.0, samples))[:, None]
    inner[0] = 0.0
    inner[1] = np.eye(d)[0] * r1
    log_hi = min(math.log(R1) + 5.0, _MAX_LOG)
    outer = _directions(rng, samples, d) * np.exp(rng.uniform(math.log(R1), log_hi, samples))[:, None]
    outer[0] = np.eye(d)[0] * R1
    a, b = T.apply(inner)
    inner_bad = int(np.sum(~(np.all(a == inner, axis=1) & np.all(b == 0.0, axis=1))))
    a, b = T.apply(outer)
    outer_bad = int(np.sum(~(np.all(a == 0.0, axis=1) & np.all(b == outer, axis=1))))
    return {"inner_mismatches": inner_bad, "outer_mismatches": outer_bad, "samples": samples}


def spiral_trace(T: BendingMap, points: int = 400, margin: float = 1.0):
    """Block norms ``(||first||, ||second||)`` along a radial ray.

    The ray runs log-uniformly over ``[r e^-margin, R e^margin]``; the trace
    of a bending is a logarithmic spiral joining the two coordinate axes.
    """
    p = T.params
    lt = np.linspace(p.log_r - margin, min(p.log_R + margin, _MAX_LOG), points)
    t = np.exp(lt)
    c, s = coefficients_from_radius(t, p)
    return c * t, s * t
