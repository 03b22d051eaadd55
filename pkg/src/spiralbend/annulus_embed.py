"""Annulus-glued embedding of finite point clouds into a model space.

A radius schedule ``R_1 < R_2 < ...`` splits space into overlapping closed
annuli.  Chart ``j`` covers ``R_{2j-2} <= |x| <= R_{2j+1}`` (with
``R_0 = 0``) and bends with radii ``(R_{2j-1}, R_{2j})`` from block ``j``
into block ``j+1``.  Odd charts pair their blocks with ``Z_i``, even charts
with l_2; neighbouring charts agree on their overlap because both send the
point unchanged into the shared block.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.linalg import qr

from .bending import BendingMap, params_from_log_radii
from .errors import ConsistencyError, InvalidArgument, InvalidParameter, NeedsExtension
from .harness import SCHEMA, DistortionReport, jsonable, pairwise_distortion
from .model_space import ModelSpace, euclidean_rows
from .norms2d import HALF_PI, UncondNorm2, l2


# ---------------------------------------------------------------- bounds


def _case3_parts(gamma, zeta, d, eps):
    x = eps / d
    lower = (1.0 / (1.0 + x)) * (1.0 / ((1.0 + zeta) * (1.0 + gamma) ** 2) - x)
    upper = (1.0 + x) / (1.0 - x) if x < 1 else math.inf
    return lower, upper


@dataclass(frozen=True)
class CaseBounds:
    case1: tuple
    case2: tuple
    case3: tuple

    @staticmethod
    def _q(b):
        return b[1] / b[0]

    @property
    def quotients(self) -> tuple:
        return tuple(self._q(b) for b in (self.case1, self.case2, self.case3))

    @property
    def case3_quotient(self) -> float:
        return self._q(self.case3)

    @property
    def quotient(self) -> float:
        return max(self.quotients)

    def to_dict(self) -> dict:
        return jsonable(
            {
                "case1": list(self.case1),
                "case2": list(self.case2),
                "case3": list(self.case3),
                "quotients": list(self.quotients),
                "quotient": self.quotient,
            }
        )


def case_bounds(psi: float, gamma: float, zeta: float, d: float, eps: float) -> CaseBounds:
    """Distortion brackets for pairs in one odd chart, one even chart, or far apart.

    Raises :class:`InvalidParameter` when a lower bound is not positive.
    """
    for name, v in (("psi", psi), ("eps", eps)):
        if not (0.0 < v < 1.0):
            raise InvalidArgument(f"{name} must lie in (0, 1)")
    for name, v in (("gamma", gamma), ("zeta", zeta)):
        if not (0.0 <= v < 1.0):
            raise InvalidArgument(f"{name} must lie in [0, 1)")
    if not d >= 1:
        raise InvalidArgument("d must be >= 1")
    c1 = ((1 - psi) / ((1 + zeta) * (1 + gamma) ** 2), 1 + psi)
    c2 = ((1 - psi) / (1 + gamma), 1 + psi)
    c3 = _case3_parts(gamma, zeta, d, eps)
    for name, b in (("case 1", c1), ("case 2", c2), ("case 3", c3)):
        if not b[0] > 0:
            raise InvalidParameter(f"{name} lower bound is not positive: {b[0]}")
    return CaseBounds(c1, c2, c3)


@dataclass(frozen=True)
class ParamSet:
    eps: float
    gamma: float
    psi: float
    zeta: float
    d: int
    gammas: tuple = ()

    def bounds(self) -> CaseBounds:
        return case_bounds(self.psi, self.gamma, self.zeta, self.d, self.eps)

    def to_dict(self) -> dict:
        return jsonable(
            {
                "eps": self.eps,
                "gamma": self.gamma,
                "psi": self.psi,
                "zeta": self.zeta,
                "d": self.d,
                "gammas": list(self.gammas),
            }
        )


def gamma_sequence(gamma: float, count: int) -> tuple:
    """``gamma_i = gamma / 2^(i+1)``; the product of ``1 + gamma_i`` stays below ``e^(gamma/2) <= 1 + gamma``."""
    return tuple(gamma / 2.0 ** (i + 1) for i in range(1, count + 1))


def _case12_quotient(psi, gamma, zeta):
    q1 = (1 + psi) * (1 + zeta) * (1 + gamma) ** 2 / (1 - psi)
    q2 = (1 + psi) * (1 + gamma) / (1 - psi)
    return max(q1, q2)


def _case3_quotient(gamma, zeta, d, eps):
    lo, hi = _case3_parts(gamma, zeta, d, eps)
    return hi / lo if lo > 0 else math.inf


def choose_parameters(eps: float, gamma: float = 0.0, zeta: float = 0.0, gamma_terms: int = 32) -> ParamSet:
    """Smallest ``d`` and largest ``psi`` whose case quotients stay within ``1 + eps``."""
    if not (0.0 < eps < 1.0):
        raise InvalidArgument("eps must lie in (0, 1)")
    if not (0.0 <= gamma < 1.0 and 0.0 <= zeta < 1.0):
        raise InvalidArgument("gamma and zeta must lie in [0, 1)")
    target = 1.0 + eps
    if _case12_quotient(0.0, gamma, zeta) >= target:
        raise InvalidParameter("gamma and zeta leave no room for any psi")
    if (1 + zeta) * (1 + gamma) ** 2 >= target:
        raise InvalidParameter("gamma and zeta leave no room for any d")
    hi = 1
    while _case3_quotient(gamma, zeta, hi, eps) > target:
        hi *= 2
        if hi > 2**60:
            raise InvalidParameter("no finite d satisfies the far-pair bound")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _case3_quotient(gamma, zeta, mid, eps) <= target:
            hi = mid
        else:
            lo = mid
    d = hi if hi >= 1 else 1
    a, b = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (a + b)
        if _case12_quotient(mid, gamma, zeta) <= target:
            a = mid
        else:
            b = mid
        if b - a < 1e-15:
            break
    return ParamSet(float(eps), float(gamma), float(a), float(zeta), int(d), gamma_sequence(gamma, gamma_terms))


# ---------------------------------------------------------------- schedule


@dataclass(frozen=True)
class RadiusSchedule:
    """``ln R_1, ..., ln R_m`` built from ``(psi, eps, d)``; ``R_1 = base``."""

    log_radii: tuple
    psi: float
    eps: float
    d: float
    c: float = 4.0
    base: float = 1.0

    @property
    def count(self) -> int:
        return len(self.log_radii)

    def log_radius(self, i: int) -> float:
        """``ln R_i`` with 1-based index; ``R_0 = 0``."""
        if i == 0:
            return -math.inf
        if not 1 <= i <= self.count:
            raise NeedsExtension(f"radius index {i} beyond schedule length {self.count}")
        return self.log_radii[i - 1]

    def radius(self, i: int) -> float:
        lr = self.log_radius(i)
        if lr == -math.inf:
            return 0.0
        return math.exp(lr) if lr < 709.0 else math.inf

    @property
    def radii(self) -> list:
        return [self.radius(i) for i in range(1, self.count + 1)]

    @property
    def overflow(self) -> bool:
        return any(lr >= 709.0 for lr in self.log_radii)

    def extended(self, m: int) -> "RadiusSchedule":
        return build_schedule(self.psi, self.eps, self.d, m, self.c, self.base)

    def scaled(self, lam: float) -> "RadiusSchedule":
        return build_schedule(self.psi, self.eps, self.d, self.count, self.c, self.base * lam)

    def to_dict(self) -> dict:
        return jsonable(
            {
                "psi": self.psi,
                "eps": self.eps,
                "d": self.d,
                "c": self.c,
                "base": self.base,
                "log_radii": list(self.log_radii),
                "overflow": self.overflow,
            }
        )


def build_schedule(psi: float, eps: float, d: float, m: int, c: float = 4.0, base: float = 1.0) -> RadiusSchedule:
    """Radii with ``(psi/c) ln(R_2i / R_2i-1) = pi/2`` and ``R_2i+1 / R_2i = d / eps``."""
    if not (0.0 < psi < 1.0 and 0.0 < eps < 1.0):
        raise InvalidArgument("psi and eps must lie in (0, 1)")
    if not d >= 1:
        raise InvalidArgument("d must be >= 1")
    if m < 2:
        raise InvalidArgument("schedule needs at least two radii")
    if not base > 0:
        raise InvalidArgument("base radius must be positive")
    bend = HALF_PI * c / psi
    gap = math.log(d / eps)
    logs = [math.log(base)]
    for i in range(2, m + 1):
        logs.append(logs[-1] + (bend if i % 2 == 0 else gap))
    return RadiusSchedule(tuple(logs), float(psi), float(eps), float(d), float(c), float(base))


def chart_interval(S: RadiusSchedule, j: int) -> tuple:
    """``(ln R_{2j-2}, ln R_{2j+1})``, the closed log-radius range of chart ``j``."""
    return S.log_radius(2 * j - 2), S.log_radius(2 * j + 1)


def _charts_for_radius(S: RadiusSchedule, t: float) -> list:
    # Linear comparisons keep boundary points in both closed annuli;
    # overflowed radii compare as inf.
    charts = []
    j = 1
    while True:
        if 2 * j + 1 > S.count:
            raise NeedsExtension("schedule too short for this radius")
        lo, hi = S.radius(2 * j - 2), S.radius(2 * j + 1)
        if lo > t:
            break
        if t <= hi:
            charts.append(j)
        j += 1
    return charts


def assign_annuli(x, S: RadiusSchedule) -> list:
    """Chart indices (1-based) whose closed annulus contains ``x``."""
    v = np.asarray(x, dtype=float)
    t = float(euclidean_rows(v)) if v.ndim else abs(float(v))
    return _charts_for_radius(S, t)


def extend_to_cover(S: RadiusSchedule, t: float) -> RadiusSchedule:
    """Lengthen the schedule until radius ``t`` can be assigned."""
    while True:
        try:
            _charts_for_radius(S, t)
            return S
        except NeedsExtension:
            S = S.extended(S.count + 4)


# ---------------------------------------------------------------- clouds


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray
    contains_origin: bool = False

    def __post_init__(self):
        P = np.asarray(self.points, dtype=float)
        if P.ndim != 2 or P.shape[0] == 0 or P.shape[1] == 0:
            raise InvalidArgument("point cloud must be a nonempty (N, n) array")
        if not np.all(np.isfinite(P)):
            raise InvalidArgument("point coordinates must be finite")
        if self.contains_origin and not np.any(np.all(P == 0.0, axis=1)):
            raise InvalidArgument("cloud is flagged as containing the origin but does not")
        object.__setattr__(self, "points", P)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @classmethod
    def from_json(cls, source) -> "PointCloud":
        if isinstance(source, dict):
            data = source
        else:
            text = Path(source).read_text() if Path(str(source)).exists() else str(source)
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidArgument(f"cloud is not valid JSON: {exc}") from exc
        if not isinstance(data, dict) or "points" not in data or "dim" not in data:
            raise InvalidArgument('cloud JSON needs "dim" and "points"')
        pts = data["points"]
        if not isinstance(pts, list) or len(pts) == 0:
            raise InvalidArgument("cloud has no points")
        try:
            P = np.asarray(pts, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidArgument(f"malformed points: {exc}") from exc
        if P.ndim != 2 or P.shape[1] != int(data["dim"]):
            raise InvalidArgument("points do not match the declared dimension")
        return cls(P, bool(data.get("contains_origin", False)))


def centered(cloud: PointCloud) -> tuple:
    """Translate so the origin is a cloud point; returns ``(points, translation)``."""
    P = cloud.points
    if cloud.contains_origin:
        return P, np.zeros(cloud.dim)
    idx = int(np.argmin(euclidean_rows(P)))
    shift = P[idx].copy()
    return P - shift, shift


def block_ranks(points: np.ndarray, S: RadiusSchedule, tol: float = 1e-10) -> list:
    """Rank of the cloud points inside each ball ``B(R_{4i})`` by pivoted QR."""
    norms = euclidean_rows(points)
    out = []
    i = 1
    while 4 * i <= S.count:
        inside = points[norms <= S.radius(4 * i)]
        if inside.size == 0:
            out.append(0)
        else:
            _, r, _ = qr(inside.T, mode="economic", pivoting=True)
            diag = np.abs(np.diag(r))
            out.append(int(np.sum(diag > tol * max(diag.max(), 1e-300))))
        i += 1
    return out


# ---------------------------------------------------------------- embedding


@dataclass
class EmbeddingReport:
    assignments: list
    distortion: DistortionReport
    bounds: CaseBounds
    overlap_consistent: bool
    overlap_points: int
    overlap_max_difference: float
    norm_preservation: float
    translation: list
    schedule: RadiusSchedule
    pairs_used: int
    block_ranks: list

    @property
    def measured(self) -> float:
        return self.distortion.distortion

    @property
    def theoretical_bound(self) -> float:
        return self.bounds.quotient

    @property
    def within_bound(self) -> bool:
        return self.measured <= self.theoretical_bound

    def to_dict(self) -> dict:
        return jsonable(
            {
                "schema": SCHEMA,
                "assignments": self.assignments,
                "distortion": self.distortion.to_dict(),
                "measured_distortion": self.measured,
                "theoretical_bound": self.theoretical_bound,
                "case3_quotient": self.bounds.case3_quotient,
                "case_bounds": self.bounds.to_dict(),
                "within_bound": self.within_bound,
                "overlap_consistent": self.overlap_consistent,
                "overlap_points": self.overlap_points,
                "overlap_max_difference": self.overlap_max_difference,
                "norm_preservation": self.norm_preservation,
                "translation": self.translation,
                "schedule": self.schedule.to_dict(),
                "pairs_used": self.pairs_used,
                "block_ranks": self.block_ranks,
                "worst_pair": list(self.distortion.argmax_pair),
            }
        )


def chart_bending(S: RadiusSchedule, j: int, Z: UncondNorm2, dim: int) -> BendingMap:
    """Bending of chart ``j`` with radii ``(R_{2j-1}, R_{2j})``."""
    p = params_from_log_radii(S.log_radius(2 * j - 1), S.log_radius(2 * j), Z, dim, S.c)
    return BendingMap(p)


def chart_combiner(j: int, Zs: Sequence[UncondNorm2]) -> UncondNorm2:
    if j % 2 == 1:
        i = (j - 1) // 2
        return Zs[i % len(Zs)]
    return l2()


def _chart_images(points, S, j, Zs, blocks):
    T = chart_bending(S, j, chart_combiner(j, Zs), points.shape[1])
    first, second = T.apply(points)
    out = np.zeros((points.shape[0], blocks, points.shape[1]))
    out[:, j - 1] = first
    out[:, j] = second
    return out


def embed_points(points: np.ndarray, S: RadiusSchedule, Zs: Sequence[UncondNorm2], check_overlaps: bool = True):
    """Map points through their charts; returns ``(images, model, assignments, overlap stats)``."""
    P = np.asarray(points, dtype=float)
    norms = euclidean_rows(P)
    S = extend_to_cover(S, float(norms.max()))
    assignments = [assign_annuli(p, S) for p in P]
    max_chart = max(max(a) for a in assignments)
    pairs = max_chart // 2 + 1
    blocks = 2 * pairs
    model = ModelSpace(tuple(Zs[i % len(Zs)] for i in range(pairs)), P.shape[1])
    images = np.zeros((P.shape[0], blocks, P.shape[1]))
    first_chart = np.array([a[0] for a in assignments])
    for j in np.unique(first_chart):
        idx = np.flatnonzero(first_chart == j)
        images[idx] = _chart_images(P[idx], S, int(j), Zs, blocks)
    overlap = [k for k, a in enumerate(assignments) if len(a) > 1]
    max_diff = 0.0
    if check_overlaps and overlap:
        second = np.array([assignments[k][1] for k in overlap])
        for j in np.unique(second):
            idx = np.array([k for k, jj in zip(overlap, second) if jj == j])
            other = _chart_images(P[idx], S, int(j), Zs, blocks)
            diff = np.abs(other - images[idx]).reshape(len(idx), -1).max(axis=1)
            scale = np.maximum(norms[idx], 1e-300)
            max_diff = max(max_diff, float(np.max(diff / scale)))
    if max_diff > 1e-12:
        raise ConsistencyError(f"chart images disagree on overlaps by {max_diff:.3e}")
    return images, model, assignments, S, len(overlap), max_diff


def embed_cloud(
    cloud: PointCloud,
    S: RadiusSchedule,
    Zs: UncondNorm2 | Sequence[UncondNorm2] | None = None,
    params: ParamSet | None = None,
    mode: str = "auto",
    samples: int = 1_000_000,
    seed: int = 0,
    threads: int | None = None,
):
    """Embed a finite cloud; returns ``(images, model space, report)``.

    ``params`` supplies the constants for :func:`case_bounds`; by default the
    exact model ``gamma = zeta = 0`` with the schedule's ``psi``, ``d`` and
    ``eps`` is used.
    """
    if Zs is None:
        Zs = [l2()]
    elif isinstance(Zs, UncondNorm2):
        Zs = [Zs]
    Zs = list(Zs)
    P, shift = centered(cloud)
    images, model, assignments, S, n_overlap, max_diff = embed_points(P, S, Zs)
    norms = euclidean_rows(P)
    img_norms = model.norm(images)
    pres = float(np.max(np.abs(img_norms - norms) / np.where(norms > 0, norms, 1.0)))
    if P.shape[0] >= 2:
        dist = pairwise_distortion(
            P,
            images,
            source_norm=euclidean_rows,
            target_norm=model.norm,
            mode=mode,
            samples=samples,
            seed=seed,
            threads=threads,
        )
    else:
        dist = DistortionReport(1.0, 1.0, 1.0, (0, 0), (0, 0), 0, None, True)
    if params is None:
        bounds = case_bounds(S.psi, 0.0, 0.0, S.d, S.eps)
    else:
        bounds = params.bounds()
    report = EmbeddingReport(
        assignments=assignments,
        distortion=dist,
        bounds=bounds,
        overlap_consistent=True,
        overlap_points=n_overlap,
        overlap_max_difference=max_diff,
        norm_preservation=pres,
        translation=shift.tolist(),
        schedule=S,
        pairs_used=dist.pair_count,
        block_ranks=block_ranks(P, S),
    )
    return images, model, report


def sample_cloud(n_points: int, dim: int, S: RadiusSchedule, periods: float, seed: int = 0) -> PointCloud:
    """Seeded cloud with log-uniform radii over ``periods`` schedule periods, origin included.

    One period is four consecutive radii (one odd and one even chart).
    """
    rng = np.random.default_rng(seed)
    top_index = 1 + int(round(4 * periods))
    S = S if S.count >= top_index else S.extended(top_index)
    lo = S.log_radius(1) - 2.0
    hi = S.log_radius(top_index)
    g = rng.standard_normal((n_points - 1, dim))
    g /= euclidean_rows(g)[:, None]
    r = np.exp(rng.uniform(lo, hi, n_points - 1))
    P = np.vstack([np.zeros(dim), g * r[:, None]])
    return PointCloud(P, contains_origin=True)
