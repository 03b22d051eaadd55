"""1-unconditional norms on the plane and the constants derived from them.

A norm ``Z`` on R^2 is 1-unconditional and normalized when
``Z(1, 0) = Z(0, 1) = 1`` and ``Z(a, b) = Z(|a|, |b|)``.  Such a norm
combines two normed spaces into the direct sum ``Y (+)_Z Y`` with
``||(u, v)|| = Z(||u||, ||v||)``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgument

HALF_PI = 0.5 * math.pi
LOWER_LIP = 2.0 / math.pi
UPPER_LIP = 4.0

FAMILIES = ("lp", "weighted-lp", "max-of-functionals", "tabulated-radial", "custom")


@dataclass(frozen=True, eq=False)
class UncondNorm2:
    """A 1-unconditional norm on R^2.

    Parameters
    ----------
    family : str
        One of ``FAMILIES``.
    params : dict
        Family parameters, kept for reporting.
    evaluator : callable
        Vectorized ``(a, b) -> Z(a, b)``.  It receives signed inputs when
        called through :meth:`raw`, so a faulty evaluator can be detected by
        :func:`validate_unconditional`.
    tolerance : float
        Relative accuracy of the evaluator (nonzero for tabulated norms).
    """

    family: str
    params: dict
    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(repr=False)
    tolerance: float = 0.0
    name: str = ""

    def raw(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return np.asarray(self.evaluator(a, b), dtype=float)

    def __call__(self, a, b):
        return self.raw(np.abs(a), np.abs(b))

    def describe(self) -> dict:
        out = {"family": self.family, "name": self.name or self.family}
        out.update({k: v for k, v in self.params.items() if not isinstance(v, np.ndarray)})
        if self.tolerance:
            out["tolerance"] = self.tolerance
        return out


def _lp_evaluator(p: float):
    if p == 1.0:
        return lambda a, b: np.abs(a) + np.abs(b)
    if p == 2.0:
        return lambda a, b: np.hypot(a, b)
    if math.isinf(p):
        return lambda a, b: np.maximum(np.abs(a), np.abs(b))

    def evaluate(a, b):
        a = np.abs(a)
        b = np.abs(b)
        big = np.maximum(a, b)
        safe = np.where(big > 0, big, 1.0)
        return big * ((a / safe) ** p + (b / safe) ** p) ** (1.0 / p)

    return evaluate


def lp(p: float) -> UncondNorm2:
    """The planar l_p norm, ``1 <= p <= inf``."""
    p = float(p)
    if not (p >= 1.0):
        raise InvalidArgument(f"l_p needs p >= 1, got {p}")
    label = "linf" if math.isinf(p) else f"l{p:g}"
    return UncondNorm2("lp", {"p": p}, _lp_evaluator(p), name=label)


def l1() -> UncondNorm2:
    return lp(1.0)


def l2() -> UncondNorm2:
    return lp(2.0)


def linf() -> UncondNorm2:
    return lp(math.inf)


def weighted_lp(ps: Sequence[float], weights: Sequence[float]) -> UncondNorm2:
    """Convex combination ``sum_j w_j ||(a, b)||_{p_j}`` of planar l_p norms."""
    ps = [float(p) for p in ps]
    w = np.asarray(weights, dtype=float)
    if len(ps) == 0 or len(ps) != w.size:
        raise InvalidArgument("weighted-lp needs matching nonempty exponent and weight lists")
    if np.any(w <= 0) or not math.isclose(float(w.sum()), 1.0, rel_tol=0, abs_tol=1e-12):
        raise InvalidArgument("weighted-lp weights must be positive and sum to 1")
    parts = [_lp_evaluator(p) for p in ps]

    def evaluate(a, b):
        return sum(wj * f(a, b) for wj, f in zip(w, parts))

    return UncondNorm2(
        "weighted-lp", {"ps": ps, "weights": w.tolist()}, evaluate, name="weighted-lp"
    )


def max_of_functionals(functionals: Sequence[Sequence[float]]) -> UncondNorm2:
    """``Z(a, b) = max_j (alpha_j |a| + beta_j |b|)`` with nonnegative coefficients.

    Normalization requires ``max alpha_j = max beta_j = 1``.
    """
    f = np.asarray(functionals, dtype=float)
    if f.ndim != 2 or f.shape[1] != 2 or f.shape[0] == 0:
        raise InvalidArgument("functionals must be a nonempty list of (alpha, beta) pairs")
    if np.any(f < 0) or not np.all(np.isfinite(f)):
        raise InvalidArgument("functional coefficients must be finite and nonnegative")
    if not (math.isclose(f[:, 0].max(), 1.0) and math.isclose(f[:, 1].max(), 1.0)):
        raise InvalidArgument("max-of-functionals needs max alpha = max beta = 1")
    alpha = f[:, 0].copy()
    beta = f[:, 1].copy()

    def evaluate(a, b):
        a = np.abs(np.asarray(a))[..., None]
        b = np.abs(np.asarray(b))[..., None]
        return np.max(alpha * a + beta * b, axis=-1)

    return UncondNorm2(
        "max-of-functionals", {"functionals": f.tolist()}, evaluate, name="max-of-functionals"
    )


def tabulated(angles: Sequence[float], radii: Sequence[float]) -> UncondNorm2:
    """Norm given by its unit-circle radial function on the first quadrant.

    The boundary point at angle ``theta`` is ``rho(theta) (cos theta, sin theta)``
    and ``rho`` is interpolated linearly in angle between table nodes.  The
    table must start at angle 0 and end at pi/2.
    """
    th = np.asarray(angles, dtype=float)
    rho = np.asarray(radii, dtype=float)
    if th.ndim != 1 or th.shape != rho.shape or th.size < 2:
        raise InvalidArgument("angles and radii must be 1-D arrays of equal length >= 2")
    if not (np.all(np.isfinite(th)) and np.all(np.isfinite(rho))):
        raise InvalidArgument("table entries must be finite")
    if np.any(np.diff(th) <= 0):
        raise InvalidArgument("angles must be strictly increasing")
    if abs(th[0]) > 1e-12 or abs(th[-1] - HALF_PI) > 1e-12:
        raise InvalidArgument("angles must span exactly [0, pi/2]")
    if np.any(rho <= 0):
        raise InvalidArgument("radii must be positive")
    th = th.copy()
    th[0], th[-1] = 0.0, HALF_PI
    rho = rho.copy()

    def evaluate(a, b):
        a = np.abs(a)
        b = np.abs(b)
        theta = np.arctan2(b, a)
        return np.hypot(a, b) / np.interp(theta, th, rho)

    # Linear interpolation error is about h^2 |rho''| / 8, bounded by the
    # largest second difference of the table.
    if rho.size >= 3:
        second = np.abs(np.diff(rho, 2)).max()
    else:
        second = 0.0
    tol = float(second / rho.min()) + 1e-12
    return UncondNorm2(
        "tabulated-radial",
        {"nodes": int(th.size), "angles": th, "radii": rho},
        evaluate,
        tolerance=tol,
        name="tabulated-radial",
    )


def tabulate_from(Z: UncondNorm2, nodes: int) -> UncondNorm2:
    """Sample the radial function of ``Z`` on ``nodes`` equally spaced angles."""
    th = np.linspace(0.0, HALF_PI, int(nodes))
    th[-1] = HALF_PI
    rho = 1.0 / Z(np.cos(th), np.sin(th))
    return tabulated(th, rho)


def from_json(source) -> UncondNorm2:
    """Load a tabulated norm from a JSON array of ``[angle, radius]`` pairs.

    ``source`` may be a path, a JSON string or an already parsed list.
    """
    if isinstance(source, (str, Path)) and Path(str(source)).exists():
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = source
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidArgument(f"cannot read tabulated norm: {exc}") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidArgument("tabulated norm JSON must be a list of [angle, radius] pairs")
    return tabulated(arr[:, 0], arr[:, 1])


def custom(evaluator: Callable, name: str = "custom") -> UncondNorm2:
    """Wrap an arbitrary evaluator; use :func:`validate_unconditional` before trusting it."""
    return UncondNorm2("custom", {}, evaluator, name=name)


_FAMILY_RE = re.compile(r"^l(inf|\d+(?:\.\d+)?)$")


def parse_family(text: str) -> UncondNorm2:
    """Parse ``l1``, ``l2``, ``linf``, ``l1.5`` style family strings."""
    m = _FAMILY_RE.match(text.strip().lower())
    if not m:
        raise InvalidArgument(f"unknown norm family {text!r}; expected l1, l2, linf or l<p>")
    token = m.group(1)
    return lp(math.inf if token == "inf" else float(token))


def eval_norm(Z: UncondNorm2, a: float, b: float) -> float:
    """Evaluate ``Z(|a|, |b|)`` for finite scalars."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidArgument("norm arguments must be finite")
    return float(Z(a, b))


def sphere_point(Z: UncondNorm2, tau):
    """Point ``u(tau) = (cos tau, sin tau) / Z(cos tau, sin tau)`` of the Z unit sphere.

    Accepts a scalar or an array of angles in ``[0, pi/2]``; returns an array
    with a trailing axis of length 2.
    """
    t = np.asarray(tau, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0) or np.any(t > HALF_PI):
        raise InvalidArgument("tau must lie in [0, pi/2]")
    c = np.cos(t)
    s = np.sin(t)
    s = np.where(t == 0.0, 0.0, s)
    c = np.where(t == HALF_PI, 0.0, c)
    z = Z(c, s)
    return np.stack([c / z, s / z], axis=-1)


def _circle_values(Z: UncondNorm2, tau):
    c = np.where(tau == HALF_PI, 0.0, np.cos(tau))
    s = np.where(tau == 0.0, 0.0, np.sin(tau))
    return Z(c, s)


def _trisect(f, lo: float, hi: float, tol: float, maximize: bool) -> tuple[float, float]:
    sign = -1.0 if maximize else 1.0
    best_x, best_v = lo, sign * f(lo)
    for x in (hi,):
        v = sign * f(x)
        if v < best_v:
            best_x, best_v = x, v
    while hi - lo > tol:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        v1 = sign * f(m1)
        v2 = sign * f(m2)
        for x, v in ((m1, v1), (m2, v2)):
            if v < best_v:
                best_x, best_v = x, v
        if v1 <= v2:
            hi = m2
        else:
            lo = m1
    return best_x, sign * best_v


def extremal_constants(Z: UncondNorm2, grid_size: int = 256, tol: float = 1e-10):
    """Return ``(m_Z, M_Z)``, the min and max of ``Z(cos t, sin t)`` on ``[0, pi/2]``.

    A uniform grid locates the extremes, which are then refined by
    trisection on the neighbouring grid cells.
    """
    if grid_size < 64:
        raise InvalidArgument("grid_size must be at least 64")
    tau = np.linspace(0.0, HALF_PI, grid_size + 1)
    vals = _circle_values(Z, tau)
    f = lambda t: float(_circle_values(Z, np.asarray(t)))
    out = []
    for maximize in (False, True):
        i = int(np.argmax(vals) if maximize else np.argmin(vals))
        lo = tau[max(i - 1, 0)]
        hi = tau[min(i + 1, grid_size)]
        _, v = _trisect(f, lo, hi, tol, maximize)
        v = max(v, vals[i]) if maximize else min(v, vals[i])
        out.append(float(v))
    return out[0], out[1]


def _lip_quotients(Z: UncondNorm2, grid_size: int, fd_step: float) -> float:
    tau = np.linspace(0.0, HALF_PI, grid_size + 1)
    u = sphere_point(Z, tau)
    du = np.diff(u, axis=0)
    # Every grid pair quotient is bounded by the largest adjacent one
    # (triangle inequality), so adjacent pairs give the grid supremum.
    grid_sup = float(np.max(Z(du[:, 0], du[:, 1]) / np.diff(tau)))
    # Short one-sided chords at each grid node capture the speed of u in
    # the vanishing-width limit, including at kinks sitting on nodes.
    fwd = tau[tau + fd_step <= HALF_PI]
    bwd = tau[tau - fd_step >= 0.0]
    d1 = sphere_point(Z, fwd + fd_step) - sphere_point(Z, fwd)
    d2 = sphere_point(Z, bwd) - sphere_point(Z, bwd - fd_step)
    fine = max(
        float(np.max(Z(d1[:, 0], d1[:, 1]))) / fd_step if fwd.size else 0.0,
        float(np.max(Z(d2[:, 0], d2[:, 1]))) / fd_step if bwd.size else 0.0,
    )
    return max(grid_sup, fine)


def curve_lipschitz(Z: UncondNorm2, grid_size: int = 4096, fd_step: float = 1e-4) -> float:
    """Numeric Lipschitz constant ``c_Z`` of the curve ``u`` on ``[0, pi/2]``.

    The result is clamped to the a-priori range ``[2/pi, 4]``.
    """
    if grid_size < 256:
        raise InvalidArgument("grid_size must be at least 256")
    if not (0 < fd_step < HALF_PI):
        raise InvalidArgument("fd_step must lie in (0, pi/2)")
    c = _lip_quotients(Z, grid_size, fd_step)
    return float(min(max(c, LOWER_LIP), UPPER_LIP))


@dataclass(frozen=True)
class NormConstants:
    m_Z: float
    M_Z: float
    c_Z: float
    grid_size: int
    lip_grid_size: int
    tolerance: float = 0.0

    def __post_init__(self):
        tol = 1e-9 + self.tolerance
        ok = (
            1 / math.sqrt(2) - tol <= self.m_Z <= 1 + tol
            and 1 - tol <= self.M_Z <= math.sqrt(2) + tol
            and self.m_Z <= self.M_Z
            and LOWER_LIP <= self.c_Z <= UPPER_LIP
        )
        if not ok:
            raise InvalidArgument(f"norm constants out of range: {self}")

    def to_dict(self) -> dict:
        return {
            "m_Z": self.m_Z,
            "M_Z": self.M_Z,
            "c_Z": self.c_Z,
            "grid_size": self.grid_size,
            "lip_grid_size": self.lip_grid_size,
            "tolerance": self.tolerance,
        }


def norm_constants(Z: UncondNorm2, grid_size: int = 256, lip_grid_size: int = 4096) -> NormConstants:
    m, M = extremal_constants(Z, grid_size)
    c = curve_lipschitz(Z, lip_grid_size)
    return NormConstants(m, M, c, grid_size, lip_grid_size, Z.tolerance)


@dataclass
class ValidationReport:
    passed: bool
    worst: dict
    failures: list
    tolerance: float
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst": dict(sorted(self.worst.items())),
            "failures": list(self.failures),
            "tolerance": self.tolerance,
            "samples": self.samples,
            "seed": self.seed,
        }


def validate_unconditional(
    Z: UncondNorm2, samples: int = 10_000, seed: int = 0, tol: float | None = None
) -> ValidationReport:
    """Check the norm axioms, normalization and sign symmetry on random samples.

    Violations are measured relative to the l_1 size of the arguments.  The
    report never raises; failing checks are listed in ``failures``.
    """
    if samples < 1:
        raise InvalidArgument("samples must be >= 1")
    if tol is None:
        tol = max(1e-12, 2.0 * Z.tolerance)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, 2))
    y = rng.standard_normal((samples, 2))
    t = rng.uniform(-10.0, 10.0, samples)
    a, b = x[:, 0], x[:, 1]
    size = np.abs(a) + np.abs(b)
    worst = {}
    with np.errstate(all="ignore"):
        zx = Z.raw(a, b)
        unit = np.array([Z.raw(1.0, 0.0), Z.raw(0.0, 1.0), Z.raw(-1.0, 0.0), Z.raw(0.0, -1.0)])
        worst["normalization"] = float(np.max(np.abs(unit - 1.0)))
        sym = max(
            float(np.max(np.abs(Z.raw(sa * a, sb * b) - zx) / size))
            for sa, sb in ((-1, 1), (1, -1), (-1, -1))
        )
        worst["sign_symmetry"] = sym
        worst["nonnegativity"] = float(max(0.0, -np.min(zx / size)))
        worst["homogeneity"] = float(
            np.max(np.abs(Z.raw(t * a, t * b) - np.abs(t) * zx) / (np.abs(t) * size))
        )
        s = x + y
        tri = Z.raw(s[:, 0], s[:, 1]) - zx - Z.raw(y[:, 0], y[:, 1])
        worst["triangle"] = float(
            max(0.0, np.max(tri / (size + np.abs(y[:, 0]) + np.abs(y[:, 1]))))
        )
        lower = np.maximum(np.abs(a), np.abs(b)) - zx
        upper = zx - size
        worst["l1_linf_sandwich"] = float(max(0.0, np.max(lower / size), np.max(upper / size)))
    failures = []
    for key, v in worst.items():
        if not (np.isfinite(v) and v <= tol):
            failures.append(key)
    return ValidationReport(not failures, worst, failures, float(tol), int(samples), int(seed))
