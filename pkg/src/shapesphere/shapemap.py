"""Triangles to points on the shape sphere and back.

Cluster ``k`` takes vertex ``k`` (1=A, 2=B, 3=C) as apex and the other two,
in cyclic order, as the base pair::

    cluster 1: apex A, base (B, C)
    cluster 2: apex B, base (C, A)
    cluster 3: apex C, base (A, B)

Jacobi vectors are ``R1 = base2 - base1`` and ``R2 = apex - midpoint(base)``,
mass weighted with ``mu1 = 1/2`` and ``mu2 = 2/3``. The shape sphere polar
angle is ``theta = 2 atan(|rho2| / |rho1|)``, measured from the uniform
collinear point U (theta=0) to the base-pair collision B (theta=pi), and
``phi`` is the counter-clockwise angle from rho1 to rho2, so positively
oriented triangles have ``phi > 0``.

Embedding: ``(sin t cos p, sin t sin p, cos t)``. In the cluster-1 frame the
equilateral shapes E, Ebar sit at ``(0, +-1, 0)`` and the collinear shapes
fill the great circle ``y = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .euclid import DegenerateTriangleError, PlanarTriangle

MU1 = 0.5
MU2 = 2.0 / 3.0
SQRT_MU1 = math.sqrt(MU1)
SQRT_MU2 = math.sqrt(MU2)

CLUSTERS = (1, 2, 3)
# (apex, base1, base2) vertex indices per cluster
_ROLES = {1: (0, 1, 2), 2: (1, 2, 0), 3: (2, 0, 1)}


def check_cluster(cluster: int) -> int:
    if cluster not in _ROLES:
        raise ValueError(f"cluster must be 1, 2 or 3, got {cluster!r}")
    return cluster


def next_cluster(cluster: int) -> int:
    return check_cluster(cluster) % 3 + 1


@dataclass(frozen=True)
class JacobiVectors:
    R1: tuple[float, float]
    R2: tuple[float, float]
    cluster: int


@dataclass(frozen=True)
class MassWeightedJacobi:
    rho1: tuple[float, float]
    rho2: tuple[float, float]
    cluster: int


@dataclass(frozen=True)
class ShapeCoords:
    """A point on the shape sphere in the frame of ``cluster``.

    At the poles (theta = 0 or pi) ``phi`` carries no information;
    ``phi_defined`` is False there and ``phi`` is kept at 0 by convention.
    """

    theta: float
    phi: float = 0.0
    cluster: int = 1
    phi_defined: bool = True

    def __post_init__(self):
        check_cluster(self.cluster)
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if self.theta in (0.0, math.pi) and self.phi_defined:
            object.__setattr__(self, "phi_defined", False)
        if not self.phi_defined:
            object.__setattr__(self, "phi", 0.0)

    @property
    def X(self) -> float:
        """Legendre variable cos(theta)."""
        return math.cos(self.theta)

    @property
    def is_pole(self) -> bool:
        return not self.phi_defined


# ---------------------------------------------------------------------------
# array kernels


def jacobi_array(vertices, cluster: int = 1):
    """``(R1, R2)`` for ``(..., 3, 2)`` vertex arrays."""
    v = np.asarray(vertices, dtype=float)
    i, j, k = _ROLES[check_cluster(cluster)]
    apex, b1, b2 = v[..., i, :], v[..., j, :], v[..., k, :]
    return b2 - b1, apex - 0.5 * (b1 + b2)


def shape_coords_array(vertices, cluster: int = 1):
    """``(theta, phi)`` arrays; phi is 0 wherever it is undefined."""
    R1, R2 = jacobi_array(vertices, cluster)
    rho1 = SQRT_MU1 * R1
    rho2 = SQRT_MU2 * R2
    n1 = np.hypot(rho1[..., 0], rho1[..., 1])
    n2 = np.hypot(rho2[..., 0], rho2[..., 1])
    theta = 2.0 * np.arctan2(n2, n1)
    cross = rho1[..., 0] * rho2[..., 1] - rho1[..., 1] * rho2[..., 0]
    dot = np.sum(rho1 * rho2, axis=-1)
    phi = np.arctan2(cross, dot)
    # atan2 returns -pi for (-0.0, negative); keep phi in (-pi, pi]
    phi = np.where(phi <= -math.pi, math.pi, phi)
    phi = np.where((n1 == 0.0) | (n2 == 0.0), 0.0, phi)
    return theta, phi


def reconstruct_array(theta, phi, cluster: int = 1) -> np.ndarray:
    """Canonical triangles, shape ``(..., 3, 2)``.

    The mass-weighted base vector is ``rho1 = (1, 0)``, so the base pair sits at
    ``-+R1/2 = -+(1/sqrt2, 0)`` and the apex at ``R2 = rho2 / sqrt(mu2)`` with the
    base midpoint at the origin. At theta = pi, where rho1 must vanish, the
    apex is put at unit mass-weighted distance instead.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    half = 0.5 * theta
    south = half >= 0.5 * math.pi
    safe_half = np.where(south, 0.0, half)
    r = np.where(south, 1.0, np.tan(safe_half))
    base = np.where(south, 0.0, 1.0 / SQRT_MU1)
    apex = np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1) / SQRT_MU2
    b2 = np.stack([0.5 * base, np.zeros_like(base)], axis=-1)
    b1 = -b2
    out = np.empty(theta.shape + (3, 2))
    i, j, k = _ROLES[check_cluster(cluster)]
    out[..., i, :] = apex
    out[..., j, :] = b1
    out[..., k, :] = b2
    return out


def embed_array(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def unembed_array(xyz):
    xyz = np.asarray(xyz, dtype=float)
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    theta = np.arctan2(np.hypot(x, y), z)
    phi = np.arctan2(y, x)
    phi = np.where(phi <= -math.pi, math.pi, phi)
    return theta, phi


def relabel_array(theta, phi, source: int, target: int):
    if source == target:
        return np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    return shape_coords_array(reconstruct_array(theta, phi, source), target)


# ---------------------------------------------------------------------------
# scalar operations


def jacobi(tri: PlanarTriangle, cluster: int = 1) -> JacobiVectors:
    R1, R2 = jacobi_array(tri.vertices, cluster)
    return JacobiVectors(tuple(R1.tolist()), tuple(R2.tolist()), cluster)


def mass_weight(j: JacobiVectors) -> MassWeightedJacobi:
    rho1 = tuple(SQRT_MU1 * x for x in j.R1)
    rho2 = tuple(SQRT_MU2 * x for x in j.R2)
    return MassWeightedJacobi(rho1, rho2, j.cluster)


def shape_coords(tri: PlanarTriangle, cluster: int = 1) -> ShapeCoords:
    v = tri.vertices
    if np.all(v == v[0]):
        raise DegenerateTriangleError("triple collision has no shape", kind="triple_collision")
    theta, phi = shape_coords_array(v, cluster)
    R1, R2 = jacobi_array(v, cluster)
    defined = bool(np.any(R1 != 0.0) and np.any(R2 != 0.0))
    return ShapeCoords(float(theta), float(phi), cluster, defined)


def reconstruct(s: ShapeCoords) -> PlanarTriangle:
    return PlanarTriangle.from_array(reconstruct_array(s.theta, s.phi, s.cluster))


def relabel(s: ShapeCoords, to: int) -> ShapeCoords:
    """The same shape expressed in the frame of cluster ``to``."""
    check_cluster(to)
    if to == s.cluster:
        return s
    return shape_coords(reconstruct(s), to)


def embed(s: ShapeCoords) -> np.ndarray:
    return embed_array(s.theta, s.phi)


def from_vector(xyz, cluster: int = 1) -> ShapeCoords:
    v = np.asarray(xyz, dtype=float)
    v = v / np.linalg.norm(v)
    theta, phi = unembed_array(v)
    return ShapeCoords(float(theta), float(phi), cluster, bool(np.hypot(v[0], v[1]) > 0.0))


def rotation_about_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def relabel_rotation(source: int, target: int) -> np.ndarray:
    """Rotation taking cluster-``source`` embedded coordinates to cluster-``target`` ones.

    Changing cluster is a rotation by a multiple of 2*pi/3 about the axis
    through E and Ebar (the y axis). Going 1 -> 2 maps B(2) = (pi/3, 0) to
    the south pole, i.e. rotates by +2*pi/3 about y.
    """
    steps = (check_cluster(target) - check_cluster(source)) % 3
    return rotation_about_y(steps * 2.0 * math.pi / 3.0)


def distance(s1: ShapeCoords, s2: ShapeCoords) -> float:
    """Geodesic distance on the unit shape sphere (frames reconciled)."""
    v1 = embed(s1)
    v2 = embed(relabel(s2, s1.cluster)) if s2.cluster != s1.cluster else embed(s2)
    return float(np.arctan2(np.linalg.norm(np.cross(v1, v2)), np.dot(v1, v2)))


# ---------------------------------------------------------------------------
# special shapes

SPECIAL_NAMES = ("E", "Ebar", "U", "B", "H")


def special_point(name: str, k: int | None = None) -> ShapeCoords:
    """Catalogued shape in cluster-1 coordinates.

    ``U(k)``, ``B(k)`` and ``H(k)`` are the cluster-k poles and the collinear
    point on cluster k's equator at phi = 0, each re-expressed in cluster 1.
    """
    if name == "E":
        return ShapeCoords(math.pi / 2, math.pi / 2, 1)
    if name == "Ebar":
        return ShapeCoords(math.pi / 2, -math.pi / 2, 1)
    if name not in ("U", "B", "H"):
        raise ValueError(f"unknown special shape {name!r}")
    if k is None:
        raise ValueError(f"{name} needs a cluster index")
    local = {
        "U": ShapeCoords(0.0, 0.0, k, False),
        "B": ShapeCoords(math.pi, 0.0, k, False),
        "H": ShapeCoords(math.pi / 2, 0.0, k),
    }[name]
    if k == 1:
        return local
    return _snap(relabel(local, 1))


def _snap(s: ShapeCoords) -> ShapeCoords:
    # rounding in the reconstruct path leaves ~1e-16 noise on exact values
    theta = s.theta
    for exact in (0.0, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi):
        if abs(theta - exact) < 1e-13:
            theta = exact
    phi = s.phi
    for exact in (0.0, math.pi, -math.pi / 2, math.pi / 2):
        if abs(phi - exact) < 1e-13:
            phi = exact
    return ShapeCoords(theta, phi, s.cluster, s.phi_defined and theta not in (0.0, math.pi))


def special_points() -> dict[str, ShapeCoords]:
    out = {"E": special_point("E"), "Ebar": special_point("Ebar")}
    for name in ("U", "B", "H"):
        for k in CLUSTERS:
            out[f"{name}{k}"] = special_point(name, k)
    return out
