"""Planar triangle geometry: sides, angles, degeneracy, maximal angle, Fermat point.

Vertices are labelled A, B, C and the labels are never reordered implicitly.
The array kernels (``angles_from_vertices`` and friends) broadcast over a
leading batch dimension and are what the shape-sphere code uses in bulk.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

LABELS = ("A", "B", "C")

#: absolute tolerance (radians) for alpha-critical / Fermat-critical comparisons
ANGLE_TOL = 1e-9
#: relative tolerance for degeneracy tests (area vs squared diameter)
DEGENERACY_RTOL = 1e-12

FERMAT_ANGLE = 2.0 * math.pi / 3.0


class DegenerateTriangleError(ValueError):
    """Raised when an operation needs a triangle with three distinct vertices."""

    def __init__(self, message, kind="collinear", pair=None):
        super().__init__(message)
        self.kind = kind
        self.pair = pair


class Classification(str, enum.Enum):
    ACUTE = "acute"
    CRITICAL = "critical"
    OBTUSE = "obtuse"


@dataclass(frozen=True)
class PlanarTriangle:
    """Three labelled vertices in the plane."""

    A: tuple[float, float]
    B: tuple[float, float]
    C: tuple[float, float]

    def __post_init__(self):
        for label in LABELS:
            p = tuple(float(x) for x in getattr(self, label))
            if len(p) != 2 or not all(math.isfinite(x) for x in p):
                raise ValueError(f"vertex {label} must be a finite 2-D point, got {p}")
            object.__setattr__(self, label, p)

    @classmethod
    def from_array(cls, vertices) -> "PlanarTriangle":
        v = np.asarray(vertices, dtype=float).reshape(3, 2)
        return cls(tuple(v[0]), tuple(v[1]), tuple(v[2]))

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C], dtype=float)

    def vertex(self, label: str) -> np.ndarray:
        return np.array(getattr(self, label), dtype=float)

    def translated(self, offset) -> "PlanarTriangle":
        return PlanarTriangle.from_array(self.vertices + np.asarray(offset, dtype=float))

    def rotated(self, angle: float) -> "PlanarTriangle":
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        return PlanarTriangle.from_array(self.vertices @ rot.T)

    def scaled(self, factor: float) -> "PlanarTriangle":
        return PlanarTriangle.from_array(self.vertices * factor)

    def reflected(self) -> "PlanarTriangle":
        """Mirror image in the x-axis (orientation reversed, labels kept)."""
        return PlanarTriangle.from_array(self.vertices * np.array([1.0, -1.0]))

    def permuted(self, order: str) -> "PlanarTriangle":
        """Relabel explicitly: ``permuted("BCA")`` puts the old B at A, etc."""
        if sorted(order) != list(LABELS):
            raise ValueError(f"not a permutation of ABC: {order!r}")
        v = self.vertices
        return PlanarTriangle.from_array(v[[LABELS.index(x) for x in order]])


@dataclass(frozen=True)
class AngleSet:
    alpha_A: float
    alpha_B: float
    alpha_C: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha_A, self.alpha_B, self.alpha_C)

    def __getitem__(self, label: str) -> float:
        return getattr(self, "alpha_" + label)


@dataclass(frozen=True)
class MaxAngle:
    value: float
    vertices: tuple[str, ...]


@dataclass(frozen=True)
class FermatResult:
    point: tuple[float, float]
    total_distance: float
    location: str  # "interior" or "at_vertex"
    vertex: str | None = None


@dataclass(frozen=True)
class DegeneracyKind:
    kind: str  # nondegenerate | collinear | binary_collision | triple_collision
    pair: str | None = None


# ---------------------------------------------------------------------------
# array kernels


def side_lengths_array(vertices) -> np.ndarray:
    """Side lengths ``(a, b, c)`` opposite A, B, C for ``(..., 3, 2)`` input."""
    v = np.asarray(vertices, dtype=float)
    A, B, C = v[..., 0, :], v[..., 1, :], v[..., 2, :]
    return np.stack(
        [np.linalg.norm(C - B, axis=-1), np.linalg.norm(A - C, axis=-1), np.linalg.norm(B - A, axis=-1)],
        axis=-1,
    )


def _corner_angle(p, q, r):
    u = q - p
    w = r - p
    cross = u[..., 0] * w[..., 1] - u[..., 1] * w[..., 0]
    dot = np.sum(u * w, axis=-1)
    return np.arctan2(np.abs(cross), dot)


def angles_from_vertices(vertices) -> np.ndarray:
    """Interior angles at A, B, C for ``(..., 3, 2)`` input.

    Uses ``atan2(|u x w|, u . w)`` on the two edge vectors leaving each vertex.
    Coincident vertices give meaningless values; callers screen them first.
    """
    v = np.asarray(vertices, dtype=float)
    A, B, C = v[..., 0, :], v[..., 1, :], v[..., 2, :]
    return np.stack([_corner_angle(A, B, C), _corner_angle(B, C, A), _corner_angle(C, A, B)], axis=-1)


# ---------------------------------------------------------------------------
# scalar operations


def side_lengths(tri: PlanarTriangle) -> tuple[float, float, float]:
    a, b, c = side_lengths_array(tri.vertices)
    return float(a), float(b), float(c)


def degeneracy(tri: PlanarTriangle) -> DegeneracyKind:
    a, b, c = side_lengths(tri)
    diameter = max(a, b, c)
    if diameter == 0.0:
        return DegeneracyKind("triple_collision")
    tol = DEGENERACY_RTOL * diameter
    # pair names follow the side opposite each vertex
    for length, pair in ((c, "AB"), (a, "BC"), (b, "CA")):
        if length <= tol:
            return DegeneracyKind("binary_collision", pair)
    v = tri.vertices
    u, w = v[1] - v[0], v[2] - v[0]
    area2 = abs(u[0] * w[1] - u[1] * w[0])
    if area2 <= DEGENERACY_RTOL * diameter**2:
        return DegeneracyKind("collinear")
    return DegeneracyKind("nondegenerate")


def vertex_angles(tri: PlanarTriangle) -> AngleSet:
    """Interior angles. Collinear input gives ``{0, 0, pi}``; collisions raise."""
    kind = degeneracy(tri)
    if kind.kind in ("binary_collision", "triple_collision"):
        where = f" {kind.pair}" if kind.pair else ""
        raise DegenerateTriangleError(
            f"angles undefined: {kind.kind}{where}", kind=kind.kind, pair=kind.pair
        )
    ang = angles_from_vertices(tri.vertices)
    return AngleSet(*(float(x) for x in ang))


def max_angle(angles: AngleSet, tol: float = ANGLE_TOL) -> MaxAngle:
    vals = angles.as_tuple()
    top = max(vals)
    tied = tuple(lab for lab, x in zip(LABELS, vals) if top - x <= tol)
    return MaxAngle(top, tied)


def classify_alpha(angles: AngleSet, alpha: float, tol: float = ANGLE_TOL) -> Classification:
    """Trichotomy of the maximal angle against the threshold ``alpha``."""
    if not (math.pi / 3 - tol <= alpha <= math.pi + tol):
        raise ValueError(f"alpha must lie in [pi/3, pi], got {alpha}")
    top = max(angles.as_tuple())
    if abs(top - alpha) <= tol:
        return Classification.CRITICAL
    return Classification.OBTUSE if top > alpha else Classification.ACUTE


def classify_fermat(angles: AngleSet, tol: float = ANGLE_TOL) -> Classification:
    return classify_alpha(angles, FERMAT_ANGLE, tol)


def _distance_sum(x, pts):
    return float(np.sum(np.linalg.norm(pts - x, axis=-1)))


def fermat_point(tri: PlanarTriangle, max_iter: int = 10_000) -> FermatResult:
    """Point minimising the summed distance to the three vertices.

    Triangles with a maximal angle of at least 2*pi/3 (within ``ANGLE_TOL``)
    are solved at the vertex of that angle. Otherwise a damped Weiszfeld
    iteration from the centroid is run and finished with a few Newton steps,
    since Weiszfeld slows down badly as the maximal angle nears 2*pi/3.
    """
    kind = degeneracy(tri)
    if kind.kind != "nondegenerate":
        raise DegenerateTriangleError(f"Fermat point needs a proper triangle ({kind.kind})", kind.kind, kind.pair)
    angles = vertex_angles(tri)
    pts = tri.vertices
    top = max_angle(angles)
    if top.value >= FERMAT_ANGLE - ANGLE_TOL:
        label = top.vertices[0]
        p = pts[LABELS.index(label)]
        return FermatResult((float(p[0]), float(p[1])), _distance_sum(p, pts), "at_vertex", label)

    diameter = max(side_lengths(tri))
    x = pts.mean(axis=0)
    for _ in range(max_iter):
        d = np.linalg.norm(pts - x, axis=-1)
        if np.any(d < 1e-15 * diameter):
            # landed on a vertex; nudge toward the centroid and carry on
            x = 0.5 * (x + pts.mean(axis=0))
            continue
        w = 1.0 / d
        target = (w[:, None] * pts).sum(axis=0) / w.sum()
        step = target - x
        x_new = x + step
        if _distance_sum(x_new, pts) > _distance_sum(x, pts):
            x_new = x + 0.5 * step
        moved = float(np.linalg.norm(x_new - x))
        x = x_new
        if moved < 1e-12 * diameter:
            break

    for _ in range(20):
        diff = x - pts
        d = np.linalg.norm(diff, axis=-1)
        u = diff / d[:, None]
        grad = u.sum(axis=0)
        hess = sum((np.eye(2) - np.outer(ui, ui)) / di for ui, di in zip(u, d))
        try:
            dx = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError:
            break
        if _distance_sum(x + dx, pts) > _distance_sum(x, pts) + 1e-15 * diameter:
            break
        x = x + dx
        if np.linalg.norm(dx) < 1e-15 * diameter:
            break
    return FermatResult((float(x[0]), float(x[1])), _distance_sum(x, pts), "interior", None)
