"""Angles of a triangle read off its shape-sphere coordinates.

In any cluster frame, with ``V = sqrt(3) tan(theta/2)``, the angle at the
cluster apex satisfies::

    cot(alpha) = (V**2 - 1) / (2 V |sin phi|)

The authoritative route is still geometric (reconstruct a representative
triangle and measure it); the closed form is kept as a cross-check and as the
fast path for curve tracing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import euclid
from .euclid import ANGLE_TOL, DegenerateTriangleError
from .shapemap import CLUSTERS, ShapeCoords, reconstruct_array, relabel_array

SQRT3 = math.sqrt(3.0)
RIGHT_THETA = math.pi / 3


def v_of_theta(theta):
    """``V = sqrt(3) tan(theta/2)``; V = 1 exactly on the rightness circle."""
    t = np.asarray(theta, dtype=float)
    if np.any(t >= math.pi) or np.any(t < 0.0):
        raise ValueError("V is defined for theta in [0, pi); theta = pi is a binary collision")
    out = SQRT3 * np.tan(0.5 * t)
    return float(out) if out.ndim == 0 else out


def cot_of_alpha(alpha: float) -> float:
    """``k = cot(alpha)`` with the right angle mapped to exactly 0."""
    if not (0.0 < alpha <= math.pi):
        raise ValueError(f"alpha must lie in (0, pi], got {alpha}")
    if alpha == math.pi / 2:
        return 0.0
    if alpha == math.pi:
        return -math.inf
    return math.cos(alpha) / math.sin(alpha)


def cot_law_angle(theta, phi):
    """Apex angle from the closed-form law, using ``|sin phi|`` for both orientations."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    v = SQRT3 * np.tan(0.5 * theta)
    return np.arctan2(2.0 * v * np.abs(np.sin(phi)), v * v - 1.0)


def angles_array(theta, phi, cluster: int = 1) -> np.ndarray:
    """Planar angles at A, B, C of the shapes ``(theta, phi)`` in ``cluster``'s frame."""
    return euclid.angles_from_vertices(reconstruct_array(theta, phi, cluster))


def max_angle_array(theta, phi, cluster: int = 1) -> np.ndarray:
    """Maximal planar angle over the sphere, via reconstruct-and-measure.

    Binary collisions give garbage here; they have measure zero under sampling.
    """
    return angles_array(theta, phi, cluster).max(axis=-1)


def apex_angle_from_shape(s: ShapeCoords) -> float:
    """Angle at the apex vertex of ``s.cluster``, measured on a reconstructed triangle."""
    if s.is_pole:
        raise DegenerateTriangleError("apex angle undefined at a pole of the cluster frame", kind="pole")
    if s.phi == 0.0 or abs(s.phi) == math.pi:
        raise DegenerateTriangleError("collinear shape: apex angle is 0 or pi", kind="collinear")
    return float(angles_array(s.theta, s.phi, s.cluster)[s.cluster - 1])


@dataclass(frozen=True)
class MaxAngleField:
    alpha_max: float
    clusters: tuple[int, ...]


def max_angle_from_shape(s: ShapeCoords, tol: float = ANGLE_TOL) -> MaxAngleField:
    """Maximal angle of the shape and the clusters whose apex attains it."""
    tri = euclid.PlanarTriangle.from_array(reconstruct_array(s.theta, s.phi, s.cluster))
    kind = euclid.degeneracy(tri)
    if kind.kind in ("binary_collision", "triple_collision"):
        raise DegenerateTriangleError("maximal angle undefined at a binary collision", kind.kind, kind.pair)
    angles = euclid.angles_from_vertices(tri.vertices)
    top = float(angles.max())
    return MaxAngleField(top, tuple(k for k in CLUSTERS if top - angles[k - 1] <= tol))


@dataclass(frozen=True)
class CapMembership:
    region: str  # inside_obtuse_cap | on_cap_circle | acute_region
    clusters: tuple[int, ...] = ()


def cluster_thetas(s: ShapeCoords) -> dict[int, float]:
    out = {}
    for k in CLUSTERS:
        theta, _ = relabel_array(s.theta, s.phi, s.cluster, k)
        out[k] = float(theta)
    return out


def right_cap_membership(s: ShapeCoords, tol: float = ANGLE_TOL) -> CapMembership:
    """Locate ``s`` relative to the three caps ``theta_k < pi/3`` of obtuseness."""
    thetas = cluster_thetas(s)
    on = tuple(k for k, t in thetas.items() if abs(t - RIGHT_THETA) <= tol)
    if on:
        return CapMembership("on_cap_circle", on)
    inside = tuple(k for k, t in thetas.items() if t < RIGHT_THETA)
    if inside:
        return CapMembership("inside_obtuse_cap", inside)
    return CapMembership("acute_region")
