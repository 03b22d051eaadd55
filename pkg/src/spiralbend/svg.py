"""Static SVG 1.1 figures for the polygon cover, the bending spiral and radius schedules."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

SIZE = 480
PAD = 24


class _Canvas:
    """Maps a world box onto a square canvas with y pointing up."""

    def __init__(self, xmin, xmax, ymin, ymax, size=SIZE):
        span = max(xmax - xmin, ymax - ymin) or 1.0
        self.x0, self.y0 = xmin, ymin
        self.scale = (size - 2 * PAD) / span
        self.size = size
        self.items = []

    def pt(self, x, y):
        return PAD + (x - self.x0) * self.scale, self.size - PAD - (y - self.y0) * self.scale

    def polyline(self, pts, stroke, closed=False, width=1.2, dash=None):
        coords = " ".join(f"{a:.3f},{b:.3f}" for a, b in (self.pt(x, y) for x, y in pts))
        tag = "polygon" if closed else "polyline"
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<{tag} points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )

    def dot(self, x, y, color, r=2.0):
        a, b = self.pt(x, y)
        self.items.append(f'<circle cx="{a:.3f}" cy="{b:.3f}" r="{r}" fill="{color}"/>')

    def text(self, x, y, s, size=11):
        a, b = self.pt(x, y)
        self.items.append(f'<text x="{a:.3f}" y="{b:.3f}" font-size="{size}">{escape(s)}</text>')

    def render(self, title: str) -> str:
        body = "\n  ".join(self.items)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.size}" '
            f'height="{self.size}" viewBox="0 0 {self.size} {self.size}">\n'
            f"  <title>{escape(title)}</title>\n  {body}\n</svg>\n"
        )


def polygon_figure(profile, polygon, points: int = 720) -> str:
    """Body, its ``(1 + omega)`` dilation and the polygon ``C`` with the corner chain."""
    body = profile.body.boundary(points)
    lim = (1.0 + polygon.omega) * 1.05
    cv = _Canvas(-lim, lim, -lim, lim)
    cv.polyline(body, "#1f77b4", closed=True)
    cv.polyline((1.0 + polygon.omega) * body, "#7f7f7f", closed=True, dash="4,3")
    cv.polyline(polygon.ring(), "#d62728", closed=True, width=1.0)
    for x, y in polygon.P:
        cv.dot(x, y, "#2ca02c")
    for x, y in polygon.R:
        if np.all(np.isfinite([x, y])):
            cv.dot(x, y, "#d62728", r=1.5)
    cv.text(-lim * 0.95, lim * 0.9, f"k = {polygon.k}, omega = {polygon.omega:.4f}, {polygon.top} top")
    return cv.render("polygon cover")


def spiral_figure(xs, ys, log_r: float, log_R: float) -> str:
    """Trace of ``(||first block||, ||second block||)`` drawn with a logarithmic radius.

    Direction is kept exactly; the distance from the origin is
    ``ln(t) - ln(r) + 1`` so the spiral between ``r`` and ``R`` stays visible.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    t = np.hypot(xs, ys)
    ang = np.arctan2(ys, xs)
    rad = np.maximum(np.log(t) - log_r + 1.0, 0.0)
    pts = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
    lim = float(rad.max()) * 1.05 or 1.0
    cv = _Canvas(-0.05 * lim, lim, -0.05 * lim, lim)
    cv.polyline([(0, 0), (lim, 0)], "#7f7f7f", width=0.8)
    cv.polyline([(0, 0), (0, lim)], "#7f7f7f", width=0.8)
    cv.polyline(pts, "#1f77b4")
    for lr, name in ((log_r, "r"), (log_R, "R")):
        k = int(np.argmin(np.abs(np.log(t) - lr)))
        cv.dot(*pts[k], "#d62728")
        cv.text(pts[k][0], pts[k][1], f" {name}")
    return cv.render("bending spiral trace (log radius)")


def schedule_figure(log_radii, chart_count: int | None = None) -> str:
    """Radii ``ln R_i`` on a line with the chart intervals ``[R_{2j-2}, R_{2j+1}]`` above it."""
    lr = np.asarray(log_radii, dtype=float)
    lo, hi = float(lr[0]), float(lr[-1])
    span = hi - lo or 1.0
    cv = _Canvas(lo - 0.05 * span, hi + 0.05 * span, -0.1 * span, 0.5 * span)
    cv.polyline([(lo, 0), (hi, 0)], "#000000", width=0.8)
    for i, v in enumerate(lr, start=1):
        cv.polyline([(v, -0.02 * span), (v, 0.02 * span)], "#000000", width=0.8)
        cv.text(v, -0.06 * span, f"{i}", size=8)
    n = len(lr)
    charts = chart_count if chart_count is not None else (n - 1) // 2
    for j in range(1, charts + 1):
        a = lr[max(2 * j - 3, 0)] if j > 1 else lo
        b_idx = min(2 * j, n - 1)
        level = (0.05 + 0.04 * (j % 2)) * span
        color = "#1f77b4" if j % 2 else "#ff7f0e"
        cv.polyline([(a, level), (lr[b_idx], level)], color, width=2.0)
    cv.text(lo, 0.4 * span, "ln R_i and chart intervals")
    return cv.render("radius schedule")


def write(path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)

