"""Polygonal covering of a symmetric planar convex body.

A body ``A`` symmetric about both axes with ``(+-1, 0)`` and ``(0, +-1)`` on
its boundary is sampled at heights ``1 - i delta`` (``delta = 1/k``).  From
the radii ``r_i`` a polygon ``C`` is built whose first-quadrant chain is
``P_0, R_0, P_1, R_1, ..., R_{k-1}, P_k`` and which satisfies
``C subset (1 + omega(delta)) A`` with ``omega(delta) = 4 delta + sqrt(delta)``.
Any convex ``H`` containing ``A`` whose boundary meets the horizontal
intervals ``[r_i, (1 + delta) r_i]`` lies inside ``C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import shapely

from .errors import InvalidArgument, InvalidBody
from .harness import jsonable
from .norms2d import lp

FLAT_TOP_THRESHOLD = 1e-12
CLAUSE_TOL = 1e-12
GAUGE_TOL = 1e-9
_BISECT_STEPS = 100


def omega(delta: float) -> float:
    """``4 delta + sqrt(delta)``."""
    return 4.0 * delta + math.sqrt(delta)


# ---------------------------------------------------------------- bodies


class Body:
    """A symmetric planar convex body given by its gauge.

    ``half_width(y)`` is the largest ``x`` with ``(x, y)`` in the body; the
    default implementation bisects the gauge along the horizontal ray.
    """

    name = "body"

    def gauge(self, x, y) -> np.ndarray:
        raise NotImplementedError

    def half_width(self, y) -> np.ndarray:
        y = np.abs(np.asarray(y, dtype=float))
        lo = np.zeros_like(y)
        hi = np.full_like(y, 1.0)
        while np.any(self.gauge(hi, y) <= 1.0):
            hi = np.where(self.gauge(hi, y) <= 1.0, 2.0 * hi, hi)
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            inside = self.gauge(mid, y) <= 1.0
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        return np.where(self.gauge(np.zeros_like(y), y) <= 1.0, lo, np.nan)

    def boundary(self, count: int = 2000) -> np.ndarray:
        phi = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
        c, s = np.cos(phi), np.sin(phi)
        g = self.gauge(c, s)
        return np.stack([c / g, s / g], axis=1)


class LpBall(Body):
    """Unit ball of l_p on R^2 (``p = inf`` is the square)."""

    def __init__(self, p: float):
        if not p >= 1:
            raise InvalidBody("p must be >= 1")
        self.p = float(p)
        self._norm = lp(p)
        self.name = "linf-ball" if math.isinf(self.p) else f"l{self.p:g}-ball"

    def gauge(self, x, y):
        return self._norm(np.abs(np.asarray(x, float)), np.abs(np.asarray(y, float)))

    def half_width(self, y):
        y = np.abs(np.asarray(y, dtype=float))
        with np.errstate(invalid="ignore"):
            if math.isinf(self.p):
                w = np.ones_like(y)
            elif self.p == 1.0:
                w = 1.0 - y
            else:
                w = np.maximum(1.0 - y**self.p, 0.0) ** (1.0 / self.p)
        return np.where(y <= 1.0, w, np.nan)


class ProfileBody(Body):
    """``{(x, y) : |y| <= 1, |x| <= r(|y|)}`` for an even concave profile ``r``."""

    def __init__(self, r: Callable, name: str = "profile"):
        self.r = r
        self.name = name

    def half_width(self, y):
        y = np.abs(np.asarray(y, dtype=float))
        out = np.asarray(self.r(np.minimum(y, 1.0)), dtype=float)
        return np.where(y <= 1.0, out, np.nan)

    def gauge(self, x, y):
        x = np.abs(np.asarray(x, dtype=float))
        y = np.abs(np.asarray(y, dtype=float))
        x, y = np.broadcast_arrays(x, y)
        # The body lies between the diamond and the square, so the gauge is
        # bracketed by max(|x|, |y|) and |x| + |y|.
        lo = np.maximum(x, y)
        hi = x + y
        zero = hi == 0
        lo = np.where(zero, 1.0, lo)
        hi = np.where(zero, 1.0, hi)

        def inside(t):
            return x / t <= self.r(np.minimum(y / t, 1.0))

        at_lo = inside(lo)
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            ok = inside(mid)
            hi = np.where(ok, mid, hi)
            lo = np.where(ok, lo, mid)
        t = np.where(at_lo, np.maximum(x, y), hi)
        return np.where(zero, 0.0, t)


class ScaledBody(Body):
    """Image of ``body`` under ``(x, y) -> (sx x, sy y)``."""

    def __init__(self, body: Body, sx: float, sy: float | None = None):
        self.body = body
        self.sx = float(sx)
        self.sy = float(sx if sy is None else sy)
        if self.sx <= 0 or self.sy <= 0:
            raise InvalidBody("scale factors must be positive")
        self.name = f"scaled({body.name}, {self.sx:g}, {self.sy:g})"

    def gauge(self, x, y):
        return self.body.gauge(np.asarray(x, float) / self.sx, np.asarray(y, float) / self.sy)

    def half_width(self, y):
        y = np.abs(np.asarray(y, dtype=float))
        return self.sx * self.body.half_width(y / self.sy)


def disk() -> LpBall:
    return LpBall(2.0)


def diamond() -> LpBall:
    return LpBall(1.0)


def square() -> LpBall:
    return LpBall(math.inf)


def superellipse(p: float = 3.0) -> LpBall:
    return LpBall(p)


def _check_normalized(body: Body, tol: float = 1e-9):
    x = np.array([1.0, -1.0, 0.0, 0.0])
    y = np.array([0.0, 0.0, 1.0, -1.0])
    g = body.gauge(x, y)
    if not np.all(np.abs(g - 1.0) <= tol):
        raise InvalidBody(f"(+-1, 0) and (0, +-1) must lie on the boundary; gauges {g.tolist()}")
    sym = body.gauge(np.array([0.3, -0.3, 0.3, -0.3]), np.array([0.4, 0.4, -0.4, -0.4]))
    if np.ptp(sym) > tol:
        raise InvalidBody("body is not symmetric about the coordinate axes")


# ---------------------------------------------------------------- profile


@dataclass
class RadialProfile:
    """Radii ``r_0 ... r_k`` of a body at heights ``1 - i/k``."""

    k: int
    radii: np.ndarray
    body: Body | None = field(default=None, repr=False)

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        if self.k < 5:
            raise InvalidArgument("k must be at least 5")
        if self.radii.shape != (self.k + 1,):
            raise InvalidArgument(f"expected {self.k + 1} radii, got {self.radii.shape}")
        r = self.radii
        if not np.all(np.isfinite(r)) or np.any(r < 0):
            raise InvalidBody("radii must be finite and nonnegative")
        if abs(r[-1] - 1.0) > 1e-9:
            raise InvalidBody(f"r_k must equal 1, got {r[-1]}")
        scale = max(1.0, float(r.max()))
        if np.any(np.diff(r) < -1e-12 * scale):
            raise InvalidBody("radii must be nondecreasing in i")
        L = self.L
        bad = np.nonzero(np.diff(L[1:]) > 1e-12 * scale)[0]
        if bad.size:
            i = int(bad[0]) + 1
            raise InvalidBody(f"L_i must be nonincreasing for i >= 1; L_{i} < L_{i + 1}")
        if self.body is None:
            self.body = self.piecewise_body()

    @property
    def delta(self) -> float:
        return 1.0 / self.k

    @property
    def heights(self) -> np.ndarray:
        h = 1.0 - np.arange(self.k + 1) * self.delta
        h[-1] = 0.0
        return h

    @property
    def L(self) -> np.ndarray:
        """``L_0 = r_0`` and ``L_i = r_i - r_{i-1}``."""
        return np.concatenate([[self.radii[0]], np.diff(self.radii)])

    @property
    def top(self) -> str:
        return "flat" if self.radii[0] > FLAT_TOP_THRESHOLD else "sharp"

    def piecewise_body(self) -> ProfileBody:
        h = self.heights[::-1]
        r = self.radii[::-1]
        return ProfileBody(lambda y: np.interp(y, h, r), name="piecewise-linear")

    @classmethod
    def from_samples(cls, radii) -> "RadialProfile":
        radii = np.asarray(radii, dtype=float)
        return cls(radii.size - 1, radii)

    def to_dict(self) -> dict:
        return jsonable({"k": self.k, "delta": self.delta, "top": self.top, "radii": self.radii})


def sample_profile(body: Body, k: int) -> RadialProfile:
    """Radii of ``body`` at heights ``1 - i/k``; ``r_0`` is the flat-top half-length."""
    if k < 5:
        raise InvalidArgument("k must be at least 5")
    _check_normalized(body)
    y = 1.0 - np.arange(k + 1) / k
    y[-1] = 0.0
    r = np.asarray(body.half_width(y), dtype=float)
    if r[0] <= FLAT_TOP_THRESHOLD:
        r[0] = 0.0
    return RadialProfile(k, r, body)


# ---------------------------------------------------------------- radial function


@dataclass
class RadialReport:
    concave: bool
    even: bool
    nonincreasing: bool
    violations: dict

    @property
    def passed(self) -> bool:
        return self.concave and self.even and self.nonincreasing

    def to_dict(self) -> dict:
        return jsonable({**self.__dict__, "passed": self.passed})


def check_radial_function(t, r, tol: float = 1e-12) -> RadialReport:
    """Discrete concavity, evenness and monotonicity of samples ``r(t)`` on ``[-1, 1]``."""
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    if t.shape != r.shape or t.ndim != 1 or t.size < 3:
        raise InvalidArgument("need matching 1-D arrays with at least three samples")
    order = np.argsort(t)
    t, r = t[order], r[order]
    if np.any(np.diff(t) <= 0):
        raise InvalidArgument("sample abscissae must be distinct")
    slopes = np.diff(r) / np.diff(t)
    jumps = np.diff(slopes)
    scale = tol * max(1.0, float(np.abs(slopes).max()))
    concave_bad = np.nonzero(jumps > scale)[0] + 1
    mirrored = np.interp(-t, t, r)
    inside = np.abs(t) <= min(-t[0], t[-1]) + 1e-15
    even_bad = np.nonzero(inside & (np.abs(mirrored - r) > tol * max(1.0, np.abs(r).max())))[0]
    pos = t >= 0
    mono_bad = np.nonzero(np.diff(r[pos]) > tol * max(1.0, np.abs(r).max()))[0]
    violations = {
        "concavity": [float(t[i]) for i in concave_bad],
        "evenness": [float(t[i]) for i in even_bad],
        "monotonicity": [float(t[pos][i]) for i in mono_bad],
    }
    return RadialReport(concave_bad.size == 0, even_bad.size == 0, mono_bad.size == 0, violations)


# ---------------------------------------------------------------- polygon


def line_intersection(p1, p2, q1, q2, rel_tol: float = 1e-14):
    """Intersection of line ``p1 p2`` with line ``q1 q2``; ``None`` if parallel."""
    p1, p2, q1, q2 = (np.asarray(v, dtype=float) for v in (p1, p2, q1, q2))
    d1 = p2 - p1
    d2 = q2 - q1
    det = d1[0] * (-d2[1]) - d1[1] * (-d2[0])
    if abs(det) <= rel_tol * max(np.linalg.norm(d1) * np.linalg.norm(d2), 1e-300):
        return None
    rhs = q1 - p1
    s = (rhs[0] * (-d2[1]) - rhs[1] * (-d2[0])) / det
    return p1 + s * d1


def sharp_top_alpha(r1: float, delta: float) -> float:
    return ((1 + delta) * r1 - delta) / ((1 - 2 * delta - delta * delta) * r1 + delta)


@dataclass
class CoverPolygon:
    k: int
    delta: float
    omega: float
    top: str
    P: np.ndarray
    R: np.ndarray
    Q: dict
    T: dict
    degenerate: list
    diagnostics: dict

    def chain(self) -> np.ndarray:
        """First-quadrant chain ``P_0, R_0, P_1, ..., R_{k-1}, P_k``."""
        pts = np.empty((2 * self.k + 1, 2))
        pts[0::2] = self.P
        pts[1::2] = self.R
        return pts

    def ring(self) -> np.ndarray:
        """Closed boundary of ``C`` (clockwise, first vertex not repeated)."""
        c = self.chain()
        q4 = c[::-1][1:] * [1, -1]
        q3 = c[1:] * [-1, -1]
        q2 = c[::-1][1:-1] * [-1, 1]
        return np.concatenate([c, q4, q3, q2])

    def shape(self) -> shapely.Polygon:
        return shapely.Polygon(self.ring())

    def outer_corners(self) -> np.ndarray:
        """``R_i`` lies on or outside the segment ``P_i P_{i+1}`` (cross product >= 0)."""
        d = self.P[1:] - self.P[:-1]
        v = self.R - self.P[:-1]
        return d[:, 0] * v[:, 1] - d[:, 1] * v[:, 0] >= -CLAUSE_TOL

    def to_dict(self) -> dict:
        return jsonable(
            {
                "k": self.k,
                "delta": self.delta,
                "omega": self.omega,
                "top": self.top,
                "P": self.P,
                "R": self.R,
                "Q": {str(i): q for i, q in self.Q.items()},
                "T": {str(i): q for i, q in self.T.items()},
                "degenerate": self.degenerate,
                "diagnostics": self.diagnostics,
            }
        )


def build_polygon(p: RadialProfile) -> CoverPolygon:
    """Vertices ``P_i``, ``R_i`` and diagnostic points ``Q_i``, ``T_i`` of the cover."""
    k, d = p.k, p.delta
    if not d < 0.25:
        raise InvalidArgument("delta must be below 1/4")
    r = p.radii
    y = p.heights
    P = np.stack([(1 + d) * r, y], axis=1)
    P[0] = (0.0, 1.0)
    P[k] = (1 + d, 0.0)

    def A(i):
        return np.array([r[i], y[i]])

    R = np.full((k, 2), np.nan)
    degenerate = []
    diagnostics = {}

    def put(i, point):
        if point is None:
            degenerate.append(i)
        else:
            R[i] = point

    for i in range(1, k - 1):
        put(i, line_intersection(A(i - 1), P[i], P[i + 1], A(i + 2)))
    put(k - 1, line_intersection((r[k - 1], -d), (1 + d, 0.0), A(k - 2), P[k - 1]))
    if p.top == "flat":
        put(0, line_intersection(P[1], A(2), (0.0, 1.0), (1.0, 1.0)))
    else:
        put(0, line_intersection((-r[1], 1 - d), (0.0, 1.0), (1.0, 0.0), P[1]))
        alpha = sharp_top_alpha(r[1], d)
        closed = np.array([r[1] * alpha, d * alpha + 1.0])
        diagnostics["alpha"] = alpha
        diagnostics["R0_closed_form"] = closed
        diagnostics["R0_closed_form_gap"] = float(np.max(np.abs(closed - R[0])))

    L = p.L
    Q, T = {}, {}
    q_gap = t_gap = 0.0
    for i in range(1, k):
        x = 2 * (1 + d) * r[i] - r[i + 1]
        formula = r[i - 1] + 2 * d * r[i] + (L[i] - L[i + 1])
        q_gap = max(q_gap, abs(x - formula))
        Q[i - 1] = np.array([x, y[i - 1]])
    Q[k - 1] = np.array([2 + 2 * d - r[k - 1], d])
    for i in range(2, k + 1):
        x = 2 * (1 + d) * r[i - 1] - r[i - 2]
        formula = r[i] + 2 * d * r[i - 1] + (L[i - 1] - L[i])
        t_gap = max(t_gap, abs(x - formula))
        T[i] = np.array([x, y[i]])
    diagnostics["Q_formula_gap"] = q_gap
    diagnostics["T_formula_gap"] = t_gap
    return CoverPolygon(k, d, omega(d), p.top, P, R, Q, T, degenerate, diagnostics)


# ---------------------------------------------------------------- certificates


@dataclass
class Clause:
    name: str
    passed: bool
    worst_margin: float
    failures: list

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def _clause(name, indices, lhs, rhs) -> Clause:
    lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
    margin = lhs - rhs
    if margin.size == 0:
        return Clause(name, True, math.inf, [])
    bad = [int(indices[j]) for j in np.nonzero(~(margin >= -CLAUSE_TOL))[0]]
    return Clause(name, not bad, float(np.min(margin)), bad)


@dataclass
class ContainmentCertificate:
    certified: bool
    omega: float
    max_vertex_gauge: float
    max_sample_gauge: float
    samples: int
    counterexamples: list
    clauses: list
    degenerate: list

    def clause(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return jsonable(
            {
                "certified": self.certified,
                "omega": self.omega,
                "max_vertex_gauge": self.max_vertex_gauge,
                "max_sample_gauge": self.max_sample_gauge,
                "samples": self.samples,
                "counterexamples": self.counterexamples,
                "clauses": [c.to_dict() for c in self.clauses],
                "degenerate": self.degenerate,
            }
        )


def boundary_samples(ring: np.ndarray, count: int) -> np.ndarray:
    """``count`` points equally spaced by arc length along a closed ring."""
    line = shapely.LinearRing(ring)
    dist = np.linspace(0.0, line.length, count, endpoint=False)
    pts = shapely.line_interpolate_point(line, dist)
    return shapely.get_coordinates(pts)


def inequality_clauses(c: CoverPolygon, p: RadialProfile) -> list:
    """Every scalar inequality of the covering argument, evaluated exactly."""
    k, d, w = c.k, c.delta, c.omega
    r, L, y = p.radii, p.L, p.heights
    start = math.ceil(d**-0.5 + 1 - 1e-12)
    clauses = []
    idx = np.arange(max(start, 1), k)
    clauses.append(
        _clause(
            "B_i-1",
            idx,
            (1 + w) * r[idx - 1],
            r[idx - 1] + 2 * d * r[idx] + (L[idx] - L[idx + 1]),
        )
    )
    idx = np.arange(max(start, 2), k + 1)
    clauses.append(
        _clause("T_i", idx, (1 + w) * r[idx], r[idx] + 2 * d * r[idx - 1] + (L[idx - 1] - L[idx]))
    )
    clauses.append(_clause("k-1", [k - 1], (1 + w) * r[k - 1], 2 + 2 * d - r[k - 1]))
    idx = np.array([i for i in range(1, k + 1) if (i - 1) < d**-0.5])
    clauses.append(_clause("lift", idx, (1 + w) * (1 - idx * d), 1 - (idx - 1) * d))
    idx = np.arange(1, k)
    clauses.append(
        _clause("level_cover", idx, (1 + w) * r[idx], r[idx - 1] + 2 * d * r[idx] + (L[idx] - L[idx + 1]))
    )
    # Horizontal-stretch region: corners below 1 - sqrt(delta) lie in the stretched body.
    idx = np.arange(max(start, 1), k + 1)
    corners = np.concatenate([c.P[idx], c.R[idx - 1]])
    g = p.body.gauge(corners[:, 0] / (1 + w), corners[:, 1])
    clauses.append(_clause("stretch", np.concatenate([idx, idx]), np.ones_like(g), g))
    if c.top == "sharp":
        r1 = r[1]
        alpha = sharp_top_alpha(r1, d)
        xR, yR = c.R[0]
        clauses.append(_clause("R0_x", [0], (1 + w) * r1, xR))
        clauses.append(_clause("R0_y", [0], (1 + w) * (1 - d), yR))
        clauses.append(_clause("R0_y_from_x", [0], (1 - d) * w, d * (2 + w)))
        nar_rhs = d * ((3 + d) * r1 - 2) / ((1 - 2 * d - d * d) * r1 + d)
        clauses.append(_clause("nar", [0], w, nar_rhs))
        if (3 + d) * r1 > 2:
            clauses.append(_clause("nar_case_II", [0], 4 * d, d * (3 + 4 * d + d * d) / (2 - d - d * d)))
        else:
            clauses.append(_clause("nar_case_I", [0], 2.0, (3 + d) * r1))
        clauses.append(_clause("alpha", [0], 1 + w, alpha))
    return clauses


def verify_containment(
    c: CoverPolygon, p: RadialProfile, samples: int = 10_000, tol: float = GAUGE_TOL
) -> ContainmentCertificate:
    """Certify ``C subset (1 + omega) A`` by vertex gauges, boundary samples and all clauses."""
    if samples < 1:
        raise InvalidArgument("samples must be positive")
    body = p.body
    limit = 1.0 + c.omega + tol
    counter = []
    if c.degenerate:
        return ContainmentCertificate(False, c.omega, math.nan, math.nan, 0, [], [], list(c.degenerate))
    verts = c.chain()
    vg = body.gauge(verts[:, 0], verts[:, 1])
    for j in np.nonzero(vg > limit)[0]:
        counter.append({"kind": "vertex", "point": verts[j], "gauge": vg[j]})
    pts = boundary_samples(c.ring(), samples)
    sg = body.gauge(pts[:, 0], pts[:, 1])
    for j in np.nonzero(sg > limit)[0][:20]:
        counter.append({"kind": "sample", "point": pts[j], "gauge": sg[j]})
    clauses = inequality_clauses(c, p)
    certified = not counter and all(cl.passed for cl in clauses)
    return ContainmentCertificate(
        certified, c.omega, float(vg.max()), float(sg.max()), int(samples), jsonable(counter), clauses, []
    )


@dataclass
class IntervalCertificate:
    certified: bool
    hypothesis: bool
    failed_levels: list
    crossings: list
    axis_gauges: list
    contains_A: bool
    inside_C: bool
    max_gauge_in_A: float
    omega: float
    containment: ContainmentCertificate | None

    def to_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "containment"}
        out["containment"] = None if self.containment is None else self.containment.to_dict()
        return jsonable(out)


def interval_crossing(H: Body, x_lo: float, x_hi: float, y: float):
    """Bisection for ``gauge_H = 1`` on ``[x_lo, x_hi]`` at height ``y``; ``None`` if absent."""
    g_lo = float(H.gauge(x_lo, y))
    g_hi = float(H.gauge(x_hi, y))
    if not (g_lo <= 1.0 + GAUGE_TOL and g_hi >= 1.0 - GAUGE_TOL):
        return None
    lo, hi = x_lo, x_hi
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if H.gauge(mid, y) <= 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def verify_interval_body(
    H: Body, p: RadialProfile, samples: int = 10_000, tol: float = GAUGE_TOL
) -> IntervalCertificate:
    """Check the interval hypothesis for ``H`` and certify ``H subset (1 + omega) A``."""
    r, y, d = p.radii, p.heights, p.delta
    failed, crossings = [], []
    for i in range(1, p.k):
        x = interval_crossing(H, r[i], (1 + d) * r[i], y[i])
        if x is None:
            failed.append(i)
        crossings.append(x)
    axis = H.gauge(np.array([1.0, -1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0, -1.0]))
    axis_ok = bool(np.all(np.abs(axis - 1.0) <= tol))
    a_pts = p.body.boundary(samples)
    contains_A = bool(np.all(H.gauge(a_pts[:, 0], a_pts[:, 1]) <= 1.0 + tol))
    hypothesis = not failed and axis_ok and contains_A
    poly = build_polygon(p)
    h_pts = H.boundary(samples)
    region = poly.shape().buffer(tol)
    inside_C = bool(np.all(shapely.contains_xy(region, h_pts[:, 0], h_pts[:, 1])))
    g = p.body.gauge(h_pts[:, 0], h_pts[:, 1])
    max_g = float(g.max())
    cert = verify_containment(poly, p, samples, tol) if hypothesis else None
    certified = bool(hypothesis and inside_C and max_g <= 1.0 + poly.omega + tol and cert.certified)
    return IntervalCertificate(
        certified,
        hypothesis,
        failed,
        crossings,
        axis.tolist(),
        contains_A,
        inside_C,
        max_g,
        poly.omega,
        cert,
    )


@dataclass
class SectionCertificate:
    certified: bool
    radial: RadialReport
    interval: IntervalCertificate
    level_k_ok: bool

    def to_dict(self) -> dict:
        return jsonable(
            {
                "certified": self.certified,
                "radial": self.radial.to_dict(),
                "interval": self.interval.to_dict(),
                "level_k_ok": self.level_k_ok,
            }
        )


def section_check(r: Callable, h: Callable, k: int, samples: int = 10_000) -> SectionCertificate:
    """2D certificate for a section ``{|x| <= r(y)}`` against ``{|x| <= h(y)}``.

    ``r`` and ``h`` are even profiles evaluated on ``|y| <= 1``.  The level
    ``y = 0`` is reported separately in ``level_k_ok``.
    """
    t = np.linspace(-1.0, 1.0, 2001)
    radial = check_radial_function(t, r(np.abs(t)), tol=1e-9)
    A = ProfileBody(r, name="section")
    H = ProfileBody(h, name="outer-section")
    p = sample_profile(A, k)
    interval = verify_interval_body(H, p, samples)
    level_k_ok = interval_crossing(H, 1.0, 1.0 + p.delta, 0.0) is not None
    return SectionCertificate(bool(radial.passed and interval.certified), radial, interval, level_k_ok)
