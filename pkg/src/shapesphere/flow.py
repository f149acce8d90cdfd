"""Level sets of the maximal angle on the shape sphere.

A constant-angle curve for the apex of cluster ``k`` is traced by ``phi``:
writing ``k = cot(alpha)`` and ``s = |sin phi|``, the angle law
``V**2 - 2 k s V - 1 = 0`` has exactly one positive root

    V+ = k s + sqrt(k**2 s**2 + 1)        (product of the roots is -1)

and ``theta = 2 atan(V+ / sqrt 3)``. The published arcsin form
``phi = asin((1 - 2 cos theta) / (sqrt3 k sin theta))`` is double valued in
theta and singular at its turning point, so it is only used as a check.

Maximal-angle contours are assembled from these curves:

* pi/3 < alpha < pi/2: each cluster's curve is cut where a second angle
  reaches alpha, leaving three cusped arcs per hemisphere;
* alpha = pi/2: the three circles theta_k = pi/3 (the separatrix), tangent
  to each other at the binary collisions;
* pi/2 < alpha < pi: six disjoint arcs whose end points, the binary
  collisions, are limit points but not part of the contour;
* alpha = pi: the collinear great circle with the three collisions removed;
* alpha = pi/3: the two equilateral points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from .anglelaw import SQRT3, angles_array, cot_of_alpha, max_angle_array
from .euclid import ANGLE_TOL
from .shapemap import (
    CLUSTERS,
    ShapeCoords,
    embed,
    embed_array,
    relabel_array,
    relabel_rotation,
    rotation_about_y,
    special_point,
    unembed_array,
)

DEFAULT_SAMPLES = 512
RIGHT = math.pi / 2
_EDGE_TOL = 1e-12


# ---------------------------------------------------------------------------
# constant-angle curves


def v_plus(k, s):
    """Positive root of ``V**2 - 2 k s V - 1``; stable for either sign of ``k s``."""
    ks = np.asarray(k * np.asarray(s, dtype=float))
    r = np.sqrt(ks * ks + 1.0)
    with np.errstate(divide="ignore"):
        return np.where(ks >= 0.0, ks + r, 1.0 / (r - ks))


def theta_of_phi(alpha: float, phi):
    """Polar angle of the constant-``alpha`` curve above ``phi`` (cluster frame)."""
    if not (0.0 < alpha < math.pi):
        raise ValueError(f"alpha must lie in (0, pi), got {alpha}")
    k = cot_of_alpha(alpha)
    s = np.abs(np.sin(np.asarray(phi, dtype=float)))
    out = 2.0 * np.arctan(v_plus(k, s) / SQRT3)
    return float(out) if out.ndim == 0 else out


def phi_of_theta(alpha: float, theta: float) -> float:
    """Principal-branch ``phi`` of the constant-``alpha`` curve at ``theta``."""
    k = cot_of_alpha(alpha)
    if k == 0.0:
        raise ValueError("alpha = pi/2: the curve is the circle theta = pi/3, not a graph over theta")
    st = math.sin(theta)
    if st == 0.0:
        raise ValueError("no curve at a pole")
    arg = (1.0 - 2.0 * math.cos(theta)) / (SQRT3 * k * st)
    if abs(arg) > 1.0 + 1e-12:
        raise ValueError(f"no curve at theta={theta}: arcsin argument {arg:.6g} outside [-1, 1]")
    return math.asin(max(-1.0, min(1.0, arg)))


def _open_nodes(a: float, b: float, n: int) -> np.ndarray:
    # Chebyshev points of the first kind: clustered at, but excluding, the ends
    j = np.arange(n)
    return 0.5 * (a + b) - 0.5 * (b - a) * np.cos(math.pi * (j + 0.5) / n)


def _closed_nodes(a: float, b: float, n: int) -> np.ndarray:
    j = np.arange(n)
    return 0.5 * (a + b) - 0.5 * (b - a) * np.cos(math.pi * j / (n - 1))


@dataclass(frozen=True, eq=False)
class ConstantAngleCurve:
    """Samples of one cluster's constant-angle curve, in that cluster's frame."""

    alpha: float
    cluster: int
    hemisphere: str
    theta: np.ndarray
    phi: np.ndarray
    endpoint_flags: tuple[str, str]

    @property
    def X(self) -> np.ndarray:
        return np.cos(self.theta)


def sample_constant_angle_curve(alpha: float, cluster: int = 1, n: int = DEFAULT_SAMPLES, hemisphere: str = "upper"):
    if not (math.pi / 3 < alpha < math.pi):
        raise ValueError(f"alpha must lie in (pi/3, pi), got {alpha}")
    if n < 2:
        raise ValueError("need at least two samples")
    if hemisphere not in ("upper", "lower"):
        raise ValueError(f"hemisphere must be 'upper' or 'lower', got {hemisphere!r}")
    phi = _open_nodes(0.0, math.pi, n)
    if hemisphere == "lower":
        phi = -phi
    theta = theta_of_phi(alpha, phi)
    # both ends run into binary collisions (V+ -> 1 as sin phi -> 0)
    return ConstantAngleCurve(alpha, cluster, hemisphere, theta, phi, ("B_point_excluded", "B_point_excluded"))


# ---------------------------------------------------------------------------
# maximal-angle contours


@dataclass(frozen=True, eq=False)
class Arc:
    """One polyline of a contour.

    ``theta``/``phi`` are cluster-1 coordinates; ``local_theta``/``local_phi``
    are the same samples in the frame of ``cluster``. ``cluster`` 0 marks an
    isolated point attained by all three apexes (the equilateral shapes).
    """

    cluster: int
    hemisphere: str
    theta: np.ndarray
    phi: np.ndarray
    local_theta: np.ndarray
    local_phi: np.ndarray
    closed: bool = False

    @property
    def xyz(self) -> np.ndarray:
        return embed_array(self.theta, self.phi)

    def __len__(self):
        return len(self.theta)


@dataclass(frozen=True, eq=False)
class MaxAngleContour:
    alpha: float
    arcs: list[Arc]
    cusps: list[ShapeCoords] = field(default_factory=list)
    excluded_limit_points: list[ShapeCoords] = field(default_factory=list)
    intersections: list[ShapeCoords] = field(default_factory=list)

    @property
    def regime(self) -> str:
        a = self.alpha
        if abs(a - math.pi / 3) <= ANGLE_TOL:
            return "equilateral"
        if abs(a - RIGHT) <= _EDGE_TOL:
            return "separatrix"
        if a >= math.pi - ANGLE_TOL:
            return "collinear"
        return "acute" if a < RIGHT else "obtuse"

    def points(self) -> np.ndarray:
        return np.concatenate([arc.xyz for arc in self.arcs]) if self.arcs else np.empty((0, 3))


def _arc(cluster, hemisphere, local_theta, local_phi, closed=False) -> Arc:
    theta, phi = relabel_array(local_theta, local_phi, cluster, 1)
    return Arc(cluster, hemisphere, theta, phi, np.asarray(local_theta), np.asarray(local_phi), closed)


def _to_cluster1(theta, phi, cluster) -> ShapeCoords:
    t, p = relabel_array(theta, phi, cluster, 1)
    return ShapeCoords(float(t), float(p), 1)


def _binary_collisions() -> list[ShapeCoords]:
    return [special_point("B", k) for k in CLUSTERS]


def _cusp_gap(alpha: float, cluster: int, phi: float) -> float:
    """Apex angle minus the larger of the other two, along the curve."""
    theta = theta_of_phi(alpha, phi)
    ang = angles_array(theta, phi, cluster)
    apex = ang[cluster - 1]
    others = np.delete(ang, cluster - 1)
    return float(apex - others.max())


def cusp_parameters(alpha: float, cluster: int = 1, hemisphere: str = "upper") -> tuple[float, float]:
    """The two ``phi`` values (cluster frame) where an acute curve stops being maximal."""
    sign = 1.0 if hemisphere == "upper" else -1.0

    def g(p):
        return _cusp_gap(alpha, cluster, sign * p)

    lo, hi = 1e-9, math.pi - 1e-9
    mid = 0.5 * math.pi
    if not (g(mid) > 0.0 and g(lo) < 0.0 and g(hi) < 0.0):
        raise RuntimeError(f"cusp bracket failed for alpha={alpha}")
    left = brentq(g, lo, mid, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    right = brentq(g, mid, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    return sign * left, sign * right


def _dedupe(points: list[ShapeCoords], tol: float = 1e-9) -> list[ShapeCoords]:
    out: list[ShapeCoords] = []
    for p in points:
        if all(np.linalg.norm(embed(p) - embed(q)) > tol for q in out):
            out.append(p)
    return out


def small_circle_intersections(c1, r1: float, c2, r2: float, tol: float = 1e-12) -> list[np.ndarray]:
    """Points of the unit sphere at angular distance r1 from c1 and r2 from c2."""
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    d = float(np.dot(c1, c2))
    det = 1.0 - d * d
    if det <= tol:
        return []
    a1, a2 = math.cos(r1), math.cos(r2)
    base = ((a1 - d * a2) * c1 + (a2 - d * a1) * c2) / det
    normal = np.cross(c1, c2)
    rem = 1.0 - float(np.dot(base, base))
    if rem < -tol:
        return []
    if rem <= tol:
        return [base / np.linalg.norm(base)]
    t = math.sqrt(rem / float(np.dot(normal, normal)))
    return [base + t * normal, base - t * normal]


def _cap_centres() -> dict[int, np.ndarray]:
    return {k: embed(special_point("U", k)) for k in CLUSTERS}


def assemble_max_angle_contour(alpha: float, n: int = DEFAULT_SAMPLES) -> MaxAngleContour:
    """The level set ``alpha_max = alpha`` with per-arc cluster provenance."""
    if not (math.pi / 3 - ANGLE_TOL <= alpha <= math.pi + ANGLE_TOL):
        raise ValueError(f"alpha must lie in [pi/3, pi], got {alpha}")
    if n < 2:
        raise ValueError("need at least two samples per arc")

    if alpha <= math.pi / 3 + ANGLE_TOL:
        arcs = []
        for name, hemi in (("E", "upper"), ("Ebar", "lower")):
            p = special_point(name)
            t, ph = np.array([p.theta]), np.array([p.phi])
            arcs.append(Arc(0, hemi, t, ph, t, ph))
        return MaxAngleContour(math.pi / 3, arcs)

    if abs(alpha - RIGHT) <= _EDGE_TOL:
        m = 2 * n
        phi = -math.pi + (np.arange(m) + 0.5) * (2.0 * math.pi / m)
        theta = np.full(m, math.pi / 3)
        arcs = [_arc(k, "both", theta, phi, closed=True) for k in CLUSTERS]
        centres = _cap_centres()
        hits = []
        for i, j in ((1, 2), (2, 3), (3, 1)):
            for x in small_circle_intersections(centres[i], math.pi / 3, centres[j], math.pi / 3):
                t, p = unembed_array(x)
                hits.append(ShapeCoords(float(t), float(p), 1))
        return MaxAngleContour(RIGHT, arcs, intersections=_dedupe(hits))

    if alpha >= math.pi - ANGLE_TOL:
        psi = _open_nodes(-math.pi / 3, math.pi / 3, n)
        theta = np.abs(psi)
        phi = np.where(psi >= 0.0, 0.0, math.pi)
        arcs = [_arc(k, "equator", theta, phi) for k in CLUSTERS]
        return MaxAngleContour(math.pi, arcs, excluded_limit_points=_binary_collisions())

    if alpha > RIGHT:
        arcs = []
        base_phi = _open_nodes(0.0, math.pi, n)
        for k in CLUSTERS:
            for hemi, sign in (("upper", 1.0), ("lower", -1.0)):
                phi = sign * base_phi
                arcs.append(_arc(k, hemi, theta_of_phi(alpha, phi), phi))
        return MaxAngleContour(alpha, arcs, excluded_limit_points=_binary_collisions())

    arcs, cusps = [], []
    for k in CLUSTERS:
        for hemi in ("upper", "lower"):
            left, right = cusp_parameters(alpha, k, hemi)
            phi = _closed_nodes(left, right, n)
            phi[0], phi[-1] = left, right
            arcs.append(_arc(k, hemi, theta_of_phi(alpha, phi), phi))
            for p in (left, right):
                cusps.append(_to_cluster1(theta_of_phi(alpha, p), p, k))
    return MaxAngleContour(alpha, arcs, cusps=_dedupe(cusps))


def separatrix(n: int = DEFAULT_SAMPLES) -> MaxAngleContour:
    return assemble_max_angle_contour(RIGHT, n)


# ---------------------------------------------------------------------------
# isosceles meridians


def isosceles_meridian_distance(s: ShapeCoords, k: int, through: str) -> float:
    """Geodesic distance from ``s`` to one half of cluster k's isosceles great circle.

    The great circle ``phi_k = +-pi/2`` holds the shapes isosceles about vertex
    k. ``through="U"`` selects the half from E over U(k) to Ebar (apex angle
    above pi/3), ``through="B"`` the half over B(k) (apex angle below pi/3).
    """
    if through not in ("U", "B"):
        raise ValueError("through must be 'U' or 'B'")
    theta, phi = relabel_array(s.theta, s.phi, s.cluster, k)
    x, y, z = embed_array(theta, phi)
    on_side = z >= 0.0 if through == "U" else z <= 0.0
    if on_side:
        return float(math.asin(min(1.0, abs(x))))
    # nearest point of the half-circle is an end point, E or Ebar
    return float(math.acos(max(-1.0, min(1.0, abs(y)))))


def flat_isosceles_distance(s: ShapeCoords, k: int) -> float:
    """Distance to the half-meridian through B(k), where acute contours have their cusps."""
    return isosceles_meridian_distance(s, k, "B")


def tall_isosceles_distance(s: ShapeCoords, k: int) -> float:
    """Distance to the half-meridian through U(k), where contours turn (d theta / d phi = 0)."""
    return isosceles_meridian_distance(s, k, "U")


# ---------------------------------------------------------------------------
# stationary points


def _dtheta_dphi(alpha: float, phi):
    k = cot_of_alpha(alpha)
    phi = np.asarray(phi, dtype=float)
    s = np.abs(np.sin(phi))
    v = v_plus(k, s)
    dv_ds = k * (1.0 + k * s / np.sqrt(k * k * s * s + 1.0))
    return 2.0 * SQRT3 / (3.0 + v * v) * dv_ds * np.cos(phi) * np.sign(np.sin(phi))


@dataclass(frozen=True)
class StationaryPoints:
    points: list[ShapeCoords]
    degenerate: bool = False


def stationary_points(contour: MaxAngleContour) -> StationaryPoints:
    """Points where ``d theta / d phi = 0`` along each arc, in the arc's own frame.

    On the separatrix and on the collinear circle every point is stationary;
    those are reported as degenerate with no points listed.
    """
    if not contour.arcs:
        raise ValueError("contour has no arcs")
    if contour.regime in ("separatrix", "collinear"):
        return StationaryPoints([], degenerate=True)
    if contour.regime == "equilateral":
        return StationaryPoints([])
    alpha = contour.alpha
    found = []
    for arc in contour.arcs:
        phi = arc.local_phi
        d = _dtheta_dphi(alpha, phi)
        for i in np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]:
            root = brentq(lambda p: float(_dtheta_dphi(alpha, p)), phi[i], phi[i + 1], xtol=1e-15)
            found.append(_to_cluster1(theta_of_phi(alpha, root), root, arc.cluster))
        for i in np.nonzero(d == 0.0)[0]:
            found.append(_to_cluster1(theta_of_phi(alpha, phi[i]), phi[i], arc.cluster))
    return StationaryPoints(_dedupe(found))


# ---------------------------------------------------------------------------
# critical points


@dataclass(frozen=True, eq=False)
class CriticalPointReport:
    """Ring of maximal-angle samples around E, Ebar or a binary collision.

    ``crossing_bearings`` are where the ring meets the separatrix (found by
    intersecting circles, not by sampling: the acute wedges at a binary
    collision are only about ``epsilon`` radians wide). ``sectors`` classifies
    the ring between consecutive crossings as "obtuse" or "acute".
    """

    label: str
    location: ShapeCoords
    kind: str  # centre | kissing_node
    epsilon: float
    bearings: np.ndarray
    alpha_max: np.ndarray
    crossing_bearings: tuple[float, ...] = ()
    sectors: tuple[str, ...] = ()

    @property
    def crossings(self) -> int:
        return len(self.crossing_bearings)


def _tangent_basis(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ref = np.array([0.0, 0.0, 1.0]) if abs(c[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = ref - np.dot(ref, c) * c
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(c, e1)


def ring_points(centre, epsilon: float, bearings) -> np.ndarray:
    c = np.asarray(centre, dtype=float)
    e1, e2 = _tangent_basis(c)
    b = np.asarray(bearings, dtype=float)[..., None]
    return math.cos(epsilon) * c + math.sin(epsilon) * (np.cos(b) * e1 + np.sin(b) * e2)


def _ring_alpha_max(centre, epsilon, bearings) -> np.ndarray:
    theta, phi = unembed_array(ring_points(centre, epsilon, bearings))
    return max_angle_array(theta, phi)


def _identify(location: ShapeCoords) -> tuple[str, str]:
    v = embed(location) if location.cluster == 1 else embed(location) @ relabel_rotation(location.cluster, 1).T
    for name in ("E", "Ebar"):
        if np.linalg.norm(v - embed(special_point(name))) < 1e-9:
            return name, "centre"
    for k in CLUSTERS:
        if np.linalg.norm(v - embed(special_point("B", k))) < 1e-9:
            return f"B{k}", "kissing_node"
    raise ValueError("critical points are E, Ebar and the binary collisions B1, B2, B3")


def probe_critical_point(location: ShapeCoords, epsilon: float = 1e-3, m: int = 360) -> CriticalPointReport:
    label, kind = _identify(location)
    centre = embed(special_point(label[0], int(label[1])) if label[0] == "B" else special_point(label))
    bearings = 2.0 * math.pi * np.arange(m) / m
    values = _ring_alpha_max(centre, epsilon, bearings)
    loc = ShapeCoords(*map(float, unembed_array(centre)), 1)
    if kind == "centre":
        return CriticalPointReport(label, loc, kind, epsilon, bearings, values)

    e1, e2 = _tangent_basis(centre)
    crossing = []
    for u in _cap_centres().values():
        for x in small_circle_intersections(centre, epsilon, u, math.pi / 3):
            crossing.append(math.atan2(float(np.dot(x, e2)), float(np.dot(x, e1))) % (2.0 * math.pi))
    crossing.sort()
    sectors = []
    for i, b in enumerate(crossing):
        nxt = crossing[(i + 1) % len(crossing)] + (2.0 * math.pi if i == len(crossing) - 1 else 0.0)
        mid = _ring_alpha_max(centre, epsilon, np.array([0.5 * (b + nxt)]))[0]
        sectors.append("obtuse" if mid > RIGHT else "acute")
    return CriticalPointReport(label, loc, kind, epsilon, bearings, values, tuple(crossing), tuple(sectors))


# ---------------------------------------------------------------------------
# symmetry


def symmetry_group() -> list[np.ndarray]:
    """The 12 isometries of the shape sphere induced by relabelling and reflection.

    Cyclic relabelling rotates by 2*pi/3 about the E-Ebar axis, swapping two
    labels rotates by pi about a U axis, and mirroring the triangle sends
    y -> -y (cluster-1 embedding).
    """
    rot = rotation_about_y(2.0 * math.pi / 3.0)
    swap = np.diag([-1.0, -1.0, 1.0])
    mirror = np.diag([1.0, -1.0, 1.0])
    out: list[np.ndarray] = []
    for a in range(3):
        for b in range(2):
            for c in range(2):
                g = np.linalg.matrix_power(rot, a) @ np.linalg.matrix_power(swap, b) @ np.linalg.matrix_power(mirror, c)
                if all(np.abs(g - h).max() > 1e-12 for h in out):
                    out.append(g)
    return out


def _polyline_distances(points: np.ndarray, arcs: list[np.ndarray], closed: list[bool]) -> np.ndarray:
    """Distance from each point to the nearest polyline (segments adjacent to the nearest vertex)."""
    verts = np.concatenate(arcs)
    prev_idx, next_idx = [], []
    start = 0
    for arc, is_closed in zip(arcs, closed):
        n = len(arc)
        local = np.arange(n)
        prv = local - 1
        nxt = local + 1
        if is_closed and n > 2:
            prv, nxt = prv % n, nxt % n
        else:
            prv[0] = -1
            nxt[-1] = -1
        prev_idx.append(np.where(prv >= 0, prv + start, -1))
        next_idx.append(np.where((nxt >= 0) & (nxt < n), nxt + start, -1))
        start += n
    prev_idx = np.concatenate(prev_idx)
    next_idx = np.concatenate(next_idx)

    best, idx = cKDTree(verts).query(points)
    for other in (prev_idx[idx], next_idx[idx]):
        ok = other >= 0
        p0 = verts[idx[ok]]
        seg = verts[other[ok]] - p0
        pts = points[ok]
        t = np.clip(np.sum((pts - p0) * seg, axis=1) / np.sum(seg * seg, axis=1), 0.0, 1.0)
        d = np.linalg.norm(pts - (p0 + t[:, None] * seg), axis=1)
        best[ok] = np.minimum(best[ok], d)
    return best


def hausdorff(arcs_a: list[np.ndarray], arcs_b: list[np.ndarray], closed_a=None, closed_b=None) -> float:
    closed_a = closed_a or [False] * len(arcs_a)
    closed_b = closed_b or [False] * len(arcs_b)
    ab = _polyline_distances(np.concatenate(arcs_a), arcs_b, closed_b).max()
    ba = _polyline_distances(np.concatenate(arcs_b), arcs_a, closed_a).max()
    return float(max(ab, ba))


@dataclass(frozen=True)
class SymmetryReport:
    distances: dict[str, float]
    tol: float

    @property
    def max_distance(self) -> float:
        return max(self.distances.values())

    @property
    def passed(self) -> bool:
        return self.max_distance < self.tol


def symmetry_check(contour: MaxAngleContour, tol: float = 1e-6, full_group: bool = False) -> SymmetryReport:
    """Hausdorff distance between the contour and its images under the flow's symmetries."""
    arcs = [a.xyz for a in contour.arcs]
    closed = [a.closed for a in contour.arcs]
    if full_group:
        ops = {f"g{i}": g for i, g in enumerate(symmetry_group())}
    else:
        ops = {
            "reflection": np.diag([1.0, -1.0, 1.0]),
            "rotation+": rotation_about_y(2.0 * math.pi / 3.0),
            "rotation-": rotation_about_y(-2.0 * math.pi / 3.0),
        }
    distances = {name: hausdorff(arcs, [a @ g.T for a in arcs], closed, closed) for name, g in ops.items()}
    return SymmetryReport(distances, tol)
