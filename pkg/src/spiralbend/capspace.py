"""A norm on R^4 = Y_1 (+) Y_2 obtained by cutting caps from the Euclidean ball.

``||x||_X = max(||x||_2, max_w |<w, x>| / h)`` with ``h = 1 - delta^2/2``:
each center ``w`` removes the symmetric pair of caps of chordal radius
``delta`` at ``+-w``.  The caps never cut the unit spheres of
``Y_1 = span(e_1, e_2)`` and ``Y_2 = span(e_3, e_4)``, yet every other
plane meets at least one cap, so the norm is Euclidean on the summands
and flat somewhere on every other 2D section.

All openings ``Omega`` here are Euclidean.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidArgument, InvalidParameter, PreconditionFailed
from .harness import jsonable
from .model_space import Subspace, euclidean_rows, opening_from_frames

Y1_FRAME = np.eye(4)[:, :2]
Y2_FRAME = np.eye(4)[:, 2:]
DEFAULT_POOL = 100_000
_EVAL_CHUNK = 20_000


def cap_height(delta: float) -> float:
    """Plane height of a cap of chordal radius ``delta``: ``1 - delta^2/2``."""
    return 1.0 - 0.5 * delta * delta


def structured_parameters(delta: float) -> tuple:
    """``(sigma, tau, a)`` with ``sigma = 1/sqrt(1 + a^2) = 1 - delta^2/2``."""
    sigma = cap_height(delta)
    tau = math.sqrt(1.0 - sigma * sigma)
    return sigma, tau, tau / sigma


def structured_centers(delta: float) -> np.ndarray:
    """The 32 centers ``+-sigma e_j +- tau e_l`` tangent to ``S(Y_1)`` and ``S(Y_2)``."""
    sigma, tau, _ = structured_parameters(delta)
    out = []
    for first, second in (((0, 1), (2, 3)), ((2, 3), (0, 1))):
        for j in first:
            for l in second:
                for sj in (1.0, -1.0):
                    for sl in (1.0, -1.0):
                        w = np.zeros(4)
                        w[j] = sj * sigma
                        w[l] = sl * tau
                        out.append(w)
    return np.array(out)


# ---------------------------------------------------------------- Grassmannian net


def random_frames(n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` random orthonormal ``4 x 2`` frames (Haar-distributed planes)."""
    q, r = np.linalg.qr(rng.standard_normal((n, 4, 2)))
    return q * np.sign(np.diagonal(r, axis1=-2, axis2=-1))[:, None, :]


def projector_vectors(frames: np.ndarray) -> np.ndarray:
    """Upper triangles of ``F F^T`` scaled so Euclidean distance is Frobenius distance."""
    P = frames @ np.swapaxes(frames, -1, -2)
    iu = np.triu_indices(4)
    weight = np.where(iu[0] == iu[1], 1.0, math.sqrt(2.0))
    return P[:, iu[0], iu[1]] * weight


def greedy_net(frames: np.ndarray, delta: float) -> np.ndarray:
    """Indices of a maximal ``delta``-separated subset, chosen in input order.

    ``Omega < delta`` forces Frobenius projector distance ``< 2 delta``, so a
    KD-tree query of that radius finds every conflicting candidate before the
    exact ``Omega`` filter.
    """
    V = projector_vectors(frames)
    tree = cKDTree(V)
    blocked = np.zeros(len(frames), dtype=bool)
    chosen = []
    for i in range(len(frames)):
        if blocked[i]:
            continue
        chosen.append(i)
        nb = np.asarray(tree.query_ball_point(V[i], 2.0 * delta), dtype=int)
        nb = nb[~blocked[nb]]
        if nb.size:
            blocked[nb[opening_from_frames(frames[i][None], frames[nb]) < delta]] = True
    return np.asarray(chosen, dtype=int)


def nearest_opening(net: np.ndarray, planes: np.ndarray, k: int = 24) -> np.ndarray:
    """Upper estimate of ``min_W Omega(W, L)`` from the ``k`` projector-nearest net planes."""
    tree = cKDTree(projector_vectors(net))
    k = min(k, len(net))
    _, idx = tree.query(projector_vectors(planes), k=k)
    idx = np.asarray(idx).reshape(len(planes), k)
    return opening_from_frames(planes[:, None], net[idx]).min(axis=1)


def min_separation(net: np.ndarray, delta: float) -> float:
    """Smallest pairwise ``Omega`` among net planes closer than ``2 delta`` in projector distance."""
    V = projector_vectors(net)
    pairs = cKDTree(V).query_pairs(2.0 * delta, output_type="ndarray")
    if pairs.size == 0:
        return math.inf
    return float(opening_from_frames(net[pairs[:, 0]], net[pairs[:, 1]]).min())


def plane_center(frame: np.ndarray) -> tuple:
    """Unit ``w`` in the plane maximizing ``min(dist(w, S(Y_1)), dist(w, S(Y_2)))``.

    ``||P_1 w(phi)||^2`` is a quadratic form in ``(cos phi, sin phi)``; the
    objective is maximal where it is closest to ``1/2``, which the
    eigen-decomposition locates exactly.
    """
    A = frame[:2, :]
    M = A.T @ A
    lam, vec = np.linalg.eigh(M)
    if lam[0] <= 0.5 <= lam[1]:
        # Mix the eigenvectors so the quadratic form equals 1/2.
        s2 = (0.5 - lam[0]) / (lam[1] - lam[0])
        coef = math.sqrt(1.0 - s2) * vec[:, 0] + math.sqrt(s2) * vec[:, 1]
    elif lam[1] < 0.5:
        coef = vec[:, 1]
    else:
        coef = vec[:, 0]
    w = frame @ coef
    w = w / np.linalg.norm(w)
    return w, sphere_distances(w)


def sphere_distances(w) -> tuple:
    """``(dist(w, S(Y_1)), dist(w, S(Y_2)))`` for a unit vector ``w``."""
    w = np.asarray(w, dtype=float)
    p1 = float(np.linalg.norm(w[:2]))
    p2 = float(np.linalg.norm(w[2:]))
    return math.sqrt(max(2.0 - 2.0 * p1, 0.0)), math.sqrt(max(2.0 - 2.0 * p2, 0.0))


# ---------------------------------------------------------------- the space


@dataclass(eq=False)
class CapSpace4:
    delta: float
    seed: int
    centers: np.ndarray
    structured_count: int = 32
    pool_size: int = 0
    net_size: int = 0
    covering_radius: float = math.nan
    min_separation: float = math.nan
    rejected: int = 0
    net_frames: np.ndarray | None = field(default=None, repr=False)
    _tree: cKDTree | None = field(default=None, repr=False)

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=float)
        if not (0.0 < self.delta < 0.25):
            raise InvalidParameter("delta must lie in (0, 1/4)")
        if self.centers.ndim != 2 or self.centers.shape[1] != 4:
            raise InvalidArgument("centers must have shape (M, 4)")
        if not np.allclose(euclidean_rows(self.centers), 1.0, rtol=0, atol=1e-12):
            raise InvalidArgument("cap centers must be unit vectors")
        self._tree = cKDTree(np.concatenate([self.centers, -self.centers]))

    @property
    def h(self) -> float:
        return cap_height(self.delta)

    @property
    def heights(self) -> np.ndarray:
        return np.full(len(self.centers), self.h)

    @property
    def covered(self) -> bool:
        return bool(self.covering_radius < self.delta)

    def cap_values(self, x) -> np.ndarray:
        """``max_w |<w, x>| / h`` via the nearest center to ``+-x/||x||``."""
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, 4)
        n = euclidean_rows(flat)
        safe = np.where(n > 0, n, 1.0)
        _, idx = self._tree.query(flat / safe[:, None])
        M = len(self.centers)
        w = self.centers[np.asarray(idx) % M]
        vals = np.abs(np.einsum("ij,ij->i", w, flat)) / self.h
        return np.where(n > 0, vals, 0.0).reshape(x.shape[:-1])

    def norm(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != 4:
            raise InvalidArgument("cap space vectors live in R^4")
        return np.maximum(euclidean_rows(x), self.cap_values(x))

    def norm_dense(self, x) -> np.ndarray:
        """Same norm by brute force over all centers (reference implementation)."""
        flat = np.asarray(x, dtype=float).reshape(-1, 4)
        out = np.empty(len(flat))
        for s in range(0, len(flat), _EVAL_CHUNK):
            blk = flat[s : s + _EVAL_CHUNK]
            cap = np.abs(blk @ self.centers.T).max(axis=1) / self.h
            out[s : s + _EVAL_CHUNK] = np.maximum(euclidean_rows(blk), cap)
        return out.reshape(np.shape(x)[:-1])

    def to_dict(self) -> dict:
        return jsonable(
            {
                "delta": self.delta,
                "seed": self.seed,
                "h": self.h,
                "structured_count": self.structured_count,
                "pool_size": self.pool_size,
                "net_size": self.net_size,
                "covering_radius": self.covering_radius,
                "covered": self.covered,
                "min_separation": self.min_separation,
                "rejected": self.rejected,
                "centers": self.centers,
                "heights": self.heights,
            }
        )

    @classmethod
    def from_dict(cls, data: dict) -> "CapSpace4":
        delta = float(data["delta"])
        heights = np.asarray(data.get("heights", []), dtype=float)
        if heights.size and not np.all(heights == cap_height(delta)):
            raise InvalidArgument("all caps must share the height 1 - delta^2/2")
        return cls(
            delta=delta,
            seed=int(data["seed"]),
            centers=np.asarray(data["centers"], dtype=float),
            structured_count=int(data.get("structured_count", 32)),
            pool_size=int(data.get("pool_size", 0)),
            net_size=int(data.get("net_size", 0)),
            covering_radius=float(data.get("covering_radius", "nan")),
            min_separation=float(data.get("min_separation", "nan")),
            rejected=int(data.get("rejected", 0)),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True))

    @classmethod
    def load(cls, path) -> "CapSpace4":
        return cls.from_dict(json.loads(Path(path).read_text()))


def build_capspace(
    delta: float, pool: int = DEFAULT_POOL, seed: int = 0, test_planes: int = 20_000
) -> CapSpace4:
    """Structured caps plus one cap pair per plane of a greedy ``Omega``-net.

    The net is a maximal ``delta``-separated subset of a seeded pool of
    random planes with ``Y_1``, ``Y_2`` inserted first.  Its covering radius
    is estimated on fresh planes; when it is not below ``delta`` the space
    is still usable and ``covered`` is ``False``.
    """
    if not (0.0 < delta < 0.25):
        raise InvalidParameter("delta must lie in (0, 1/4)")
    if pool < 0:
        raise InvalidArgument("pool must be nonnegative")
    rng = np.random.default_rng(seed)
    frames = np.concatenate([Y1_FRAME[None], Y2_FRAME[None], random_frames(pool, rng)])
    net = frames[greedy_net(frames, delta)]
    centers, rejected = [], 0
    for F in net[2:]:
        w, (d1, d2) = plane_center(F)
        if min(d1, d2) >= delta:
            centers.append(w)
        else:
            rejected += 1
    all_centers = np.concatenate([structured_centers(delta), np.array(centers).reshape(-1, 4)])
    probe = random_frames(test_planes, np.random.default_rng([seed, 1]))
    radius = float(nearest_opening(net, probe).max()) if test_planes else math.nan
    return CapSpace4(
        delta=float(delta),
        seed=int(seed),
        centers=all_centers,
        pool_size=int(pool),
        net_size=len(net),
        covering_radius=radius,
        min_separation=min_separation(net, delta),
        rejected=rejected,
        net_frames=net,
    )


def eval_norm(C: CapSpace4, x) -> float | np.ndarray:
    out = C.norm(x)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------- certificates


def _plane_sphere(frame, count, rng):
    phi = rng.uniform(0.0, 2.0 * math.pi, count)
    return np.cos(phi)[:, None] * frame[:, 0] + np.sin(phi)[:, None] * frame[:, 1]


@dataclass
class PropertyCertificate:
    isometric_deviation: float
    cap_clearance: float
    projection_max: float
    projection_attained: bool
    sandwich_low: float
    sandwich_high: float
    sandwich_slack: float
    triangle_worst: float
    homogeneity_worst: float
    counterexamples: list
    eps_gamma: str = "not certified: exists non-constructively"

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return jsonable({**self.__dict__, "passed": self.passed})


def certify_properties(
    C: CapSpace4, samples: int = 10_000, triples: int = 100_000, seed: int = 0, tol: float = 1e-12
) -> PropertyCertificate:
    """Check isometry on the summands, norm-one projections, the sandwich and norm axioms."""
    rng = np.random.default_rng(seed)
    h = C.h
    counter = []
    iso, clearance = 0.0, -math.inf
    for name, F in (("Y1", Y1_FRAME), ("Y2", Y2_FRAME)):
        s = _plane_sphere(F, samples, rng)
        dev = np.abs(C.norm(s) - 1.0)
        iso = max(iso, float(dev.max()))
        clearance = max(clearance, float(C.cap_values(s).max() * h - h))
        if dev.max() > tol:
            counter.append({"property": "i", "plane": name, "x": s[int(np.argmax(dev))]})
    x = rng.standard_normal((samples, 4))
    x = np.concatenate([x, C.centers, np.eye(4)])
    nx = C.norm(x)
    pmax, attained = 0.0, False
    for keep in (slice(0, 2), slice(2, 4)):
        px = np.zeros_like(x)
        px[:, keep] = x[:, keep]
        ratio = C.norm(px) / nx
        pmax = max(pmax, float(ratio.max()))
        attained = attained or bool(np.any(np.abs(ratio - 1.0) <= tol))
        if ratio.max() > 1.0 + tol:
            counter.append({"property": "ii", "x": x[int(np.argmax(ratio))]})
    q = euclidean_rows(x) / nx
    low, high = float(q.min()), float(q.max())
    if low < h - tol or high > 1.0 + tol:
        counter.append({"property": "iv", "low": low, "high": high})
    a = rng.standard_normal((triples, 4))
    b = rng.standard_normal((triples, 4))
    na, nb, nab = C.norm(a), C.norm(b), C.norm(a + b)
    tri = float(np.max((nab - na - nb) / (na + nb)))
    lam = rng.uniform(-5.0, 5.0, triples)
    hom = float(np.max(np.abs(C.norm(lam[:, None] * a) - np.abs(lam) * na) / (np.abs(lam) * na + 1e-300)))
    if tri > tol:
        counter.append({"property": "triangle", "worst": tri})
    if hom > 1e-14:
        counter.append({"property": "homogeneity", "worst": hom})
    return PropertyCertificate(
        iso, clearance, pmax, attained, low, high, low - h, tri, hom, jsonable(counter)
    )


# ---------------------------------------------------------------- flatness


@dataclass
class FlatnessWitness:
    found: bool
    cap_index: int
    cut_ratio: float
    u: np.ndarray | None
    v: np.ndarray | None
    midpoint_norm: float
    endpoint_norms: tuple
    chord_length: float
    margin: float

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def _as_frame(Z) -> np.ndarray:
    F = Z.frame if isinstance(Z, Subspace) else np.asarray(Z, dtype=float)
    if F.shape != (4, 2):
        raise InvalidArgument("expected a two-dimensional subspace of R^4")
    return F


def openings_to_summands(Z) -> tuple:
    F = _as_frame(Z)
    o = opening_from_frames(F[None], np.stack([Y1_FRAME, Y2_FRAME]))
    return float(o[0]), float(o[1])


def flatness_witness(C: CapSpace4, Z, gamma: float) -> FlatnessWitness:
    """A flat chord of the unit sphere of ``(Z, ||.||_X)`` cut by a cap, if one exists.

    The cap with the largest ``||F^T w|| / h`` cuts deepest; the foot point
    of its facet line satisfies every other cap constraint, and the facet is
    clipped by all caps and by the Euclidean circle to give ``u`` and ``v``.
    """
    F = _as_frame(Z)
    o1, o2 = openings_to_summands(F)
    if o1 < gamma or o2 < gamma:
        raise PreconditionFailed(f"opening to Y_1 is {o1:.3g} and to Y_2 is {o2:.3g}; need both >= {gamma}")
    h = C.h
    c = C.centers @ F
    m = euclidean_rows(c)
    j = int(np.argmax(m))
    ratio = float(m[j] / h)
    if ratio <= 1.0:
        return FlatnessWitness(False, j, ratio, None, None, math.nan, (), 0.0, ratio - 1.0)
    cj = c[j]
    p = (h / m[j] ** 2) * cj
    d = np.array([-cj[1], cj[0]]) / m[j]
    half = math.sqrt(max(1.0 - (h / m[j]) ** 2, 0.0))
    a = c @ p
    b = c @ d
    live = np.abs(b) >= 1e-15
    with np.errstate(divide="ignore"):
        t1 = (-h - a[live]) / b[live]
        t2 = (h - a[live]) / b[live]
    lo = float(max(-half, np.max(np.minimum(t1, t2), initial=-math.inf)))
    hi = float(min(half, np.min(np.maximum(t1, t2), initial=math.inf)))
    if not hi > lo:
        return FlatnessWitness(False, j, ratio, None, None, math.nan, (), 0.0, hi - lo)
    u = F @ (p + lo * d)
    v = F @ (p + hi * d)
    norms = C.norm(np.stack([u, v, 0.5 * (u + v)]))
    return FlatnessWitness(
        True, j, ratio, u, v, float(norms[2]), (float(norms[0]), float(norms[1])), float(np.linalg.norm(u - v)), hi - lo
    )


@dataclass
class FlatnessSurvey:
    planes: int
    found: int
    rate: float
    min_opening: float
    failures: list

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def flatness_survey(
    C: CapSpace4, planes: int = 1000, min_opening: float | None = None, seed: int = 0
) -> FlatnessSurvey:
    """Witness search on random planes whose openings to both summands are at least ``min_opening``."""
    gamma = 2.0 * C.delta if min_opening is None else float(min_opening)
    rng = np.random.default_rng([seed, 2])
    kept = []
    while len(kept) < planes:
        F = random_frames(4 * planes, rng)
        o = opening_from_frames(F[:, None], np.stack([Y1_FRAME, Y2_FRAME])[None])
        kept.extend(F[np.min(o, axis=1) >= gamma])
    kept = kept[:planes]
    failures, found = [], 0
    for i, F in enumerate(kept):
        w = flatness_witness(C, F, gamma)
        if w.found:
            found += 1
        else:
            failures.append({"index": i, "frame": F, "margin": w.margin})
    return FlatnessSurvey(planes, found, found / planes, gamma, jsonable(failures))


# ---------------------------------------------------------------- Observation bound


@dataclass
class ComponentReport:
    passed: bool
    opening: float
    worst_ratio: float
    gamma: float
    counterexample: np.ndarray | None

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def component_bound_check(C: CapSpace4, Z, gamma: float, samples: int = 10_000, seed: int = 0, summand: int = 1):
    """Check ``||y_other||_2 <= gamma ||y||_X`` on ``Z`` when ``Omega(Z, Y_summand) <= gamma``."""
    if summand not in (1, 2):
        raise InvalidArgument("summand must be 1 or 2")
    F = _as_frame(Z)
    o = openings_to_summands(F)[summand - 1]
    if o > gamma:
        raise PreconditionFailed(f"opening {o:.6g} to Y_{summand} exceeds gamma = {gamma}")
    rng = np.random.default_rng(seed)
    y = _plane_sphere(F, samples, rng) * rng.uniform(0.1, 10.0, (samples, 1))
    other = y[:, 2:] if summand == 1 else y[:, :2]
    ratio = euclidean_rows(other) / C.norm(y)
    k = int(np.argmax(ratio))
    ok = bool(ratio[k] <= gamma + 1e-12)
    return ComponentReport(ok, o, float(ratio[k]), float(gamma), None if ok else y[k])


# ---------------------------------------------------------------- coloring probe


@dataclass
class ColoringProfile:
    blue: float
    yellow: float
    neither: float
    flagged: int
    colors: np.ndarray
    ftc_error: float
    ftc_relative: float
    window: float
    F_min: float
    F_max: float
    sign_change: bool
    zero_at: float | None
    gamma: float

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["colors"] = "".join({-1: "B", 1: "Y", 0: "N", 2: "?"}[int(c)] for c in self.colors)
        return jsonable(d)


def color_segment(
    T: Callable,
    a,
    b,
    C: CapSpace4 | None = None,
    gamma: float | None = None,
    samples: int = 1000,
    fd_step: float = 1e-5,
    window: float | None = None,
) -> ColoringProfile:
    """Color midpoints of ``[a, b]`` by the plane ``DT(p) R^2`` and test the FTC identity.

    ``T`` maps rows of ``R^2`` to rows of ``R^4``.  Blue means ``Omega`` to
    ``Y_1`` is below ``gamma`` (default ``2 delta`` of ``C``), yellow the same
    for ``Y_2``.  ``fd_step`` is relative to the segment length and
    ``window`` defaults to a quarter of it.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    L = float(np.linalg.norm(b - a))
    if L == 0:
        raise InvalidArgument("segment endpoints coincide")
    if gamma is None:
        if C is None:
            raise InvalidArgument("give gamma or a cap space")
        gamma = 2.0 * C.delta
    u = (b - a) / L
    dt = L / samples
    t = (np.arange(samples) + 0.5) * dt
    p = a + t[:, None] * u
    hstep = fd_step * L
    cols = []
    for e in np.eye(2):
        cols.append((np.asarray(T(p + hstep * e)) - np.asarray(T(p - hstep * e))) / (2.0 * hstep))
    J = np.stack(cols, axis=-1)
    finite = np.all(np.isfinite(J), axis=(1, 2))
    Jf = np.where(finite[:, None, None], J, 0.0)
    U, s, _ = np.linalg.svd(Jf, full_matrices=False)
    rank_ok = finite & (s[:, -1] > 1e-12 * np.maximum(s[:, 0], 1e-300))
    o1 = opening_from_frames(U, Y1_FRAME)
    o2 = opening_from_frames(U, Y2_FRAME)
    colors = np.where(o1 < gamma, -1, np.where(o2 < gamma, 1, 0))
    colors = np.where(rank_ok, colors, 2)
    deriv = np.einsum("mij,j->mi", Jf, u)
    integral = deriv.sum(axis=0) * dt
    ends = np.asarray(T(np.stack([a, b])))
    err = float(np.linalg.norm((ends[1] - ends[0]) - integral))
    w = L / 4.0 if window is None else float(window)
    n_win = max(1, int(round(w / dt)))
    c = np.where(colors == 2, 0, colors).astype(float) * dt
    csum = np.concatenate([[0.0], np.cumsum(c)])
    Fv = csum[n_win:] - csum[:-n_win] if n_win <= samples else np.array([csum[-1]])
    zero_at = None
    if Fv.size:
        nz = np.nonzero((Fv[:-1] <= 0) & (Fv[1:] >= 0) | (Fv[:-1] >= 0) & (Fv[1:] <= 0))[0]
        if nz.size:
            zero_at = float(nz[0] * dt)
    n = float(samples)
    return ColoringProfile(
        blue=float(np.sum(colors == -1) / n),
        yellow=float(np.sum(colors == 1) / n),
        neither=float(np.sum(colors == 0) / n),
        flagged=int(np.sum(colors == 2)),
        colors=colors,
        ftc_error=err,
        ftc_relative=err / L,
        window=n_win * dt,
        F_min=float(Fv.min()),
        F_max=float(Fv.max()),
        sign_change=bool(Fv.min() <= 0 <= Fv.max()),
        zero_at=zero_at,
        gamma=float(gamma),
    )


# ---------------------------------------------------------------- parameter chain


SIXTH_ROOT_TWO_MINUS_ONE = 2.0 ** (1.0 / 6.0) - 1.0


@dataclass
class ChainReport:
    gamma: float
    eps: float
    delta: float
    conditions: dict

    def holds(self, name: str) -> bool | None:
        return self.conditions[name]["holds"]

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def precondition_chain(gamma: float, eps: float, delta: float) -> ChainReport:
    """Evaluate the parameter conditions and the final inequality of the contradiction."""
    r2 = math.sqrt(2.0)
    h = cap_height(delta)
    cond = {
        "gamma_range": {
            "lhs": SIXTH_ROOT_TWO_MINUS_ONE,
            "rhs": gamma,
            "relation": "sixth_root(2) - 1 > gamma > 0",
            "holds": bool(SIXTH_ROOT_TWO_MINUS_ONE > gamma > 0),
        },
        "eps_below_gamma": {"lhs": eps, "rhs": gamma, "relation": "eps < gamma", "holds": bool(0 < eps < gamma)},
        "eps_below_eps_gamma": {
            "lhs": eps,
            "rhs": "uncertifiable",
            "relation": "eps < eps(gamma)",
            "holds": None,
        },
        "delta_choice": {
            "lhs": h,
            "rhs": (1 + gamma) ** 3 / r2,
            "relation": "1 - delta^2/2 > (1 + gamma)^3 / sqrt(2)",
            "holds": bool(h > (1 + gamma) ** 3 / r2),
        },
        "contradiction": {
            "lhs": h,
            "rhs": (1 + gamma) * (1 + eps) ** 2 / r2,
            "relation": "1 - delta^2/2 <= (1 + gamma)(1 + eps)^2 / sqrt(2)",
            "holds": bool(h <= (1 + gamma) * (1 + eps) ** 2 / r2),
        },
    }
    return ChainReport(float(gamma), float(eps), float(delta), cond)
