"""Orthographic SVG pictures of maximal-angle contours on the shape sphere.

Only the hemisphere facing the viewer is drawn; hidden parts of a polyline
are dropped, not dashed. Coordinates are written with a fixed number of
decimals so the same inputs always give the same bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .flow import MaxAngleContour, assemble_max_angle_contour
from .shapemap import CLUSTERS, embed, special_points

VIEWBOX = "-1.05 -1.05 2.1 2.1"
DEFAULT_ALPHAS_DEG = (75.0, 90.0, 105.0, 120.0, 150.0)
DIGITS = 5

# one colour per contour, cycled; the separatrix always gets SEPARATRIX_STYLE
PALETTE = ("#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#e377c2", "#7f7f7f")
SEPARATRIX_STYLE = 'stroke="#d62728" stroke-width="0.012"'
CONTOUR_WIDTH = 0.006
MERIDIAN_STYLE = 'stroke="#555555" stroke-width="0.004" stroke-dasharray="0.03 0.02"'


@dataclass(frozen=True)
class View:
    """Viewing direction ``axis`` with screen basis ``right``, ``up``."""

    axis: np.ndarray
    right: np.ndarray
    up: np.ndarray

    @classmethod
    def from_axis(cls, axis) -> "View":
        v = np.asarray(axis, dtype=float)
        norm = float(np.linalg.norm(v))
        if not math.isfinite(norm) or norm == 0.0:
            raise ValueError("view axis must be a non-zero finite 3-vector")
        v = v / norm
        # screen "up" is the projection of z, or of y when looking along z
        ref = np.array([0.0, 0.0, 1.0]) if abs(v[2]) < 0.99 else np.array([0.0, 1.0, 0.0])
        up = ref - np.dot(ref, v) * v
        up /= np.linalg.norm(up)
        right = np.cross(up, v)
        return cls(v, right, up)

    def project(self, xyz: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Screen x, screen y (SVG, downward) and visibility of each point."""
        p = np.asarray(xyz, dtype=float)
        return p @ self.right, -(p @ self.up), p @ self.axis >= 0.0


def _num(x: float) -> str:
    s = f"{x:.{DIGITS}f}"
    if s.startswith("-") and float(s) == 0.0:
        s = s[1:]
    return s


def _visible_runs(view: View, xyz: np.ndarray, closed: bool) -> list[np.ndarray]:
    sx, sy, vis = view.project(xyz)
    pts = np.stack([sx, sy], axis=-1)
    if closed and len(pts) > 1:
        pts = np.vstack([pts, pts[:1]])
        vis = np.append(vis, vis[0])
    runs, start = [], None
    for i, v in enumerate(vis):
        if v and start is None:
            start = i
        if not v and start is not None:
            runs.append(pts[start:i])
            start = None
    if start is not None:
        runs.append(pts[start:])
    return runs


def _path(run: np.ndarray) -> str:
    head = f"M{_num(run[0, 0])} {_num(run[0, 1])}"
    return head + "".join(f" L{_num(x)} {_num(y)}" for x, y in run[1:])


def _polyline_elements(view, xyz, closed, style) -> list[str]:
    out = []
    for run in _visible_runs(view, xyz, closed):
        if len(run) == 1:
            out.append(f'<circle cx="{_num(run[0, 0])}" cy="{_num(run[0, 1])}" r="0.012" fill="black" {style}/>')
        else:
            out.append(f'<path d="{_path(run)}" fill="none" {style}/>')
    return out


def half_meridian(through: str, k: int, n: int = 181) -> np.ndarray:
    """Half great circle from E to Ebar through ``B(k)`` (flat isosceles) or ``U(k)`` (tall)."""
    pts = special_points()
    e = embed(pts["E"])
    p = embed(pts[f"{through}{k}"])
    t = np.linspace(0.0, math.pi, n)[:, None]
    return np.cos(t) * e + np.sin(t) * p


def render(contours: list[MaxAngleContour], view_axis=(0.0, 1.0, 0.0), width: int = 600, height: int = 600,
           meridians: bool | None = None) -> str:
    """SVG document for the given contours seen from ``view_axis``.

    Meridians (dashed) default to on whenever there is at least one contour.
    """
    if width <= 0 or height <= 0:
        raise ValueError("width and height must be positive")
    view = View.from_axis(view_axis)
    if meridians is None:
        meridians = bool(contours)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(width)}" height="{int(height)}" viewBox="{VIEWBOX}">',
        f"<desc>maximal angle contours; view axis {', '.join(_num(c) for c in view.axis)}</desc>",
        '<circle cx="0" cy="0" r="1" fill="#fafafa" stroke="black" stroke-width="0.006"/>',
    ]
    if meridians:
        lines.append('<g id="meridians">')
        for k in CLUSTERS:
            for through in ("B", "U"):
                lines.extend(_polyline_elements(view, half_meridian(through, k), False, MERIDIAN_STYLE))
        lines.append("</g>")
    colour = 0
    for c in contours:
        if c.regime == "separatrix":
            style = SEPARATRIX_STYLE
        else:
            style = f'stroke="{PALETTE[colour % len(PALETTE)]}" stroke-width="{CONTOUR_WIDTH}"'
            colour += 1
        deg = math.degrees(c.alpha)
        lines.append(f'<g class="contour {c.regime}" data-alpha="{_num(c.alpha)}" data-alpha-deg="{deg:.3f}">')
        for arc in c.arcs:
            lines.extend(_polyline_elements(view, arc.xyz, arc.closed, style))
        lines.append("</g>")
    lines.append('<g id="special-points" font-size="0.06" font-family="sans-serif">')
    for name, s in special_points().items():
        sx, sy, vis = view.project(embed(s)[None, :])
        if not vis[0]:
            continue
        x, y = float(sx[0]), float(sy[0])
        lines.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="0.015" fill="black"/>')
        if x > 0.7:
            lines.append(f'<text x="{_num(x - 0.025)}" y="{_num(y - 0.02)}" text-anchor="end">{escape(name)}</text>')
        else:
            lines.append(f'<text x="{_num(x + 0.025)}" y="{_num(y - 0.02)}">{escape(name)}</text>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def flow_figure(alphas=None, view_axis=(0.0, 1.0, 0.0), width: int = 600, height: int = 600,
                resolution: int = 256) -> str:
    if alphas is None:
        alphas = [math.radians(d) for d in DEFAULT_ALPHAS_DEG]
    contours = [assemble_max_angle_contour(a, resolution) for a in alphas]
    return render(contours, view_axis, width, height)
