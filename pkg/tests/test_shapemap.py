import math

import numpy as np
import pytest

from shapesphere import euclid, shapemap
from shapesphere.euclid import DegenerateTriangleError, PlanarTriangle
from shapesphere.shapemap import ShapeCoords

RIGHT_ISO = PlanarTriangle((0.0, 1.0), (-1.0, 0.0), (1.0, 0.0))
EQUI = PlanarTriangle((0.0, math.sqrt(3.0)), (-1.0, 0.0), (1.0, 0.0))


def uniform_sphere(rng, n):
    theta = np.arccos(rng.uniform(-1.0, 1.0, n))
    phi = rng.uniform(-math.pi, math.pi, n)
    return theta, phi


def chord(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b), axis=-1)


# ---------------------------------------------------------------- Jacobi vectors


def test_jacobi_examples():
    j = shapemap.jacobi(RIGHT_ISO, 1)
    assert j.R1 == (2.0, 0.0) and j.R2 == (0.0, 1.0)
    j = shapemap.jacobi(EQUI, 1)
    assert j.R1 == (2.0, 0.0) and j.R2 == pytest.approx((0.0, math.sqrt(3.0)))
    assert shapemap.jacobi(RIGHT_ISO.translated((5.0, 7.0)), 1) == shapemap.jacobi(RIGHT_ISO, 1)


def test_jacobi_cyclic_clusters():
    # cluster 2: apex B, base (C, A); cluster 3: apex C, base (A, B)
    j2 = shapemap.jacobi(RIGHT_ISO, 2)
    assert j2.R1 == pytest.approx(np.subtract(RIGHT_ISO.A, RIGHT_ISO.C))
    assert j2.R2 == pytest.approx(np.subtract(RIGHT_ISO.B, 0.5 * np.add(RIGHT_ISO.C, RIGHT_ISO.A)))
    j3 = shapemap.jacobi(RIGHT_ISO, 3)
    assert j3.R1 == pytest.approx(np.subtract(RIGHT_ISO.B, RIGHT_ISO.A))


def test_mass_weight_examples():
    m = shapemap.mass_weight(shapemap.JacobiVectors((2.0, 0.0), (0.0, 1.0), 1))
    assert m.rho1 == pytest.approx((math.sqrt(2.0), 0.0))
    assert m.rho2 == pytest.approx((0.0, math.sqrt(2.0 / 3.0)))
    assert np.linalg.norm(m.rho2) / np.linalg.norm(m.rho1) == pytest.approx(1.0 / math.sqrt(3.0))
    z = shapemap.mass_weight(shapemap.JacobiVectors((2.0, 0.0), (0.0, 0.0), 1))
    assert z.rho2 == (0.0, 0.0)


# ---------------------------------------------------------------- shape coordinates


def test_shape_coords_examples():
    s = shapemap.shape_coords(RIGHT_ISO, 1)
    assert (s.theta, s.phi) == pytest.approx((math.pi / 3, math.pi / 2), abs=1e-15)
    s = shapemap.shape_coords(EQUI, 1)
    assert (s.theta, s.phi) == pytest.approx((math.pi / 2, math.pi / 2), abs=1e-15)


def test_shape_coords_collisions_in_cluster1():
    # A = C: R2 = R1/2, parallel
    s = shapemap.shape_coords(PlanarTriangle((1.0, 0.0), (-1.0, 0.0), (1.0, 0.0)), 1)
    assert (s.theta, s.phi) == pytest.approx((math.pi / 3, 0.0), abs=1e-15)
    # A = B: R2 = -R1/2, antiparallel
    s = shapemap.shape_coords(PlanarTriangle((-1.0, 0.0), (-1.0, 0.0), (1.0, 0.0)), 1)
    assert (s.theta, s.phi) == pytest.approx((math.pi / 3, math.pi), abs=1e-15)


def test_shape_coords_poles_and_errors():
    b = shapemap.shape_coords(PlanarTriangle((0.0, 1.0), (0.0, 0.0), (0.0, 0.0)), 1)
    assert b.theta == math.pi and not b.phi_defined and b.is_pole
    u = shapemap.shape_coords(PlanarTriangle((0.0, 0.0), (-1.0, 0.0), (1.0, 0.0)), 1)
    assert u.theta == 0.0 and not u.phi_defined
    with pytest.raises(DegenerateTriangleError):
        shapemap.shape_coords(PlanarTriangle((1.0, 1.0), (1.0, 1.0), (1.0, 1.0)), 1)


def test_shape_coords_validation():
    with pytest.raises(ValueError):
        ShapeCoords(4.0, 0.0, 1)
    with pytest.raises(ValueError):
        ShapeCoords(1.0, 0.0, 4)
    assert ShapeCoords(1.0, 0.3).X == pytest.approx(math.cos(1.0))


def test_similarity_invariance_and_reflection():
    rng = np.random.default_rng(3)
    for _ in range(300):
        tri = PlanarTriangle.from_array(rng.normal(size=(3, 2)))
        moved = tri.translated(rng.normal(size=2)).rotated(rng.uniform(-4, 4)).scaled(rng.uniform(0.1, 10))
        for k in shapemap.CLUSTERS:
            s = shapemap.shape_coords(tri, k)
            assert chord(shapemap.embed(s), shapemap.embed(shapemap.shape_coords(moved, k))) < 1e-9
            r = shapemap.shape_coords(tri.reflected(), k)
            assert r.theta == pytest.approx(s.theta, abs=1e-12)
            assert r.phi == pytest.approx(-s.phi, abs=1e-12)


# ---------------------------------------------------------------- reconstruct


def test_reconstruct_examples():
    tri = shapemap.reconstruct(ShapeCoords(math.pi / 3, math.pi / 2, 1))
    assert euclid.vertex_angles(tri).as_tuple() == pytest.approx(euclid.vertex_angles(RIGHT_ISO).as_tuple(), abs=1e-12)
    eq = shapemap.reconstruct(ShapeCoords(math.pi / 2, math.pi / 2, 1))
    assert euclid.vertex_angles(eq).as_tuple() == pytest.approx((math.pi / 3,) * 3, abs=1e-12)

    def signed_area(t):
        v = t.vertices
        u, w = v[1] - v[0], v[2] - v[0]
        return u[0] * w[1] - u[1] * w[0]

    assert signed_area(eq) > 0.0
    assert signed_area(shapemap.reconstruct(ShapeCoords(math.pi / 2, -math.pi / 2, 1))) < 0.0


def test_reconstruct_unit_mass_weighted_base():
    tri = shapemap.reconstruct(ShapeCoords(1.1, 0.4, 2))
    m = shapemap.mass_weight(shapemap.jacobi(tri, 2))
    assert m.rho1 == pytest.approx((1.0, 0.0), abs=1e-15)


def test_round_trip_random():
    rng = np.random.default_rng(5)
    theta, phi = uniform_sphere(rng, 100_000)
    for k in shapemap.CLUSTERS:
        t2, p2 = shapemap.shape_coords_array(shapemap.reconstruct_array(theta, phi, k), k)
        err = chord(shapemap.embed_array(theta, phi), shapemap.embed_array(t2, p2))
        assert err.max() < 1e-12


# ---------------------------------------------------------------- relabel


def test_relabel_examples():
    e2 = shapemap.relabel(ShapeCoords(math.pi / 2, math.pi / 2, 1), 2)
    assert (e2.theta, e2.phi, e2.cluster) == pytest.approx((math.pi / 2, math.pi / 2, 2), abs=1e-12)
    b = shapemap.relabel(ShapeCoords(math.pi, 0.0, 1), 2)
    assert b.theta == pytest.approx(math.pi / 3, abs=1e-12)
    assert min(abs(b.phi), abs(abs(b.phi) - math.pi)) < 1e-12
    s = ShapeCoords(1.0, 0.5, 3)
    assert shapemap.relabel(s, 3) is s


def test_relabel_point_b1_brute_force():
    # the B=C collision with a separate apex A, measured directly in cluster 2
    tri = PlanarTriangle((0.0, 1.0), (2.0, 0.0), (2.0, 0.0))
    direct = shapemap.shape_coords(tri, 2)
    via = shapemap.relabel(shapemap.shape_coords(tri, 1), 2)
    assert chord(shapemap.embed(direct), shapemap.embed(via)) < 1e-12


def test_relabel_is_rotation_about_e_axis():
    rng = np.random.default_rng(9)
    theta, phi = uniform_sphere(rng, 10_000)
    v = shapemap.embed_array(theta, phi)
    for s in shapemap.CLUSTERS:
        for t in shapemap.CLUSTERS:
            t2, p2 = shapemap.relabel_array(theta, phi, s, t)
            rotated = v @ shapemap.relabel_rotation(s, t).T
            assert chord(shapemap.embed_array(t2, p2), rotated).max() < 1e-9
    # the rotation axis is E-Ebar and the angles are multiples of 2pi/3
    r = shapemap.relabel_rotation(1, 2)
    assert r @ np.array([0.0, 1.0, 0.0]) == pytest.approx([0.0, 1.0, 0.0])
    assert np.trace(r) == pytest.approx(1.0 + 2.0 * math.cos(2 * math.pi / 3))


# ---------------------------------------------------------------- embed, special points


def test_embed_examples():
    assert shapemap.embed(ShapeCoords(math.pi / 2, math.pi / 2)) == pytest.approx([0.0, 1.0, 0.0], abs=1e-15)
    assert shapemap.embed(ShapeCoords(0.0)) == pytest.approx([0.0, 0.0, 1.0])
    assert shapemap.embed(ShapeCoords(math.pi / 3, 0.0)) == pytest.approx([math.sqrt(3) / 2, 0.0, 0.5])


def test_embed_unit_norm_and_from_vector():
    rng = np.random.default_rng(2)
    theta, phi = uniform_sphere(rng, 1000)
    v = shapemap.embed_array(theta, phi)
    assert np.abs(np.linalg.norm(v, axis=-1) - 1.0).max() < 1e-12
    s = shapemap.from_vector(3.0 * v[0])
    assert shapemap.embed(s) == pytest.approx(v[0], abs=1e-15)


def test_special_points_catalogue():
    pts = shapemap.special_points()
    expected = {
        "E": (math.pi / 2, math.pi / 2),
        "Ebar": (math.pi / 2, -math.pi / 2),
        "U1": (0.0, None),
        "B1": (math.pi, None),
        "B2": (math.pi / 3, 0.0),
        "B3": (math.pi / 3, math.pi),
        "U2": (2 * math.pi / 3, math.pi),
        "U3": (2 * math.pi / 3, 0.0),
        "H1": (math.pi / 2, 0.0),
        "H2": (math.pi / 6, math.pi),
        "H3": (5 * math.pi / 6, math.pi),
    }
    assert set(pts) == set(expected)
    for name, (theta, phi) in expected.items():
        s = pts[name]
        assert s.cluster == 1
        assert s.theta == pytest.approx(theta, abs=1e-12), name
        if phi is None:
            assert not s.phi_defined
        else:
            assert s.phi == pytest.approx(phi, abs=1e-12), name


def _brute_force_special(name, k):
    """Direct triangles for U(k), B(k), H(k), measured in cluster 1."""
    apex_i, b1, b2 = {1: (0, 1, 2), 2: (1, 2, 0), 3: (2, 0, 1)}[k]
    v = np.zeros((3, 2))
    v[b1], v[b2] = (-1.0, 0.0), (1.0, 0.0)
    if name == "U":
        v[apex_i] = (0.0, 0.0)
    elif name == "B":
        v[b1] = v[b2] = (0.0, 0.0)
        v[apex_i] = (1.0, 0.0)
    else:
        # halfway: rho2 = rho1 in length and parallel, so R2 = sqrt(3)/2 R1
        v[apex_i] = (math.sqrt(3.0), 0.0)
    return shapemap.shape_coords(PlanarTriangle.from_array(v), 1)


@pytest.mark.parametrize("name", ["U", "B", "H"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_special_points_match_direct_construction(name, k):
    s = shapemap.special_point(name, k)
    assert chord(shapemap.embed(s), shapemap.embed(_brute_force_special(name, k))) < 1e-12


def test_special_point_errors():
    with pytest.raises(ValueError):
        shapemap.special_point("Q")
    with pytest.raises(ValueError):
        shapemap.special_point("B")


# ---------------------------------------------------------------- geometric characterisations


def test_collinearity_circle():
    rng = np.random.default_rng(4)
    tri = rng.normal(size=(2000, 3, 2))
    tri[:1000, :, 1] = 0.0  # collinear on the x axis
    theta, phi = shapemap.shape_coords_array(tri, 1)
    on_circle = (np.minimum(np.abs(phi), np.abs(np.abs(phi) - math.pi)) < 1e-9) | (theta < 1e-9) | (theta > math.pi - 1e-9)
    assert on_circle[:1000].all()
    assert not on_circle[1000:].any()


def test_rightness_cap_both_directions():
    rng = np.random.default_rng(8)
    theta, phi = uniform_sphere(rng, 5000)
    theta = np.concatenate([theta, np.full(500, math.pi / 3)])
    phi = np.concatenate([phi, rng.uniform(0.05, math.pi - 0.05, 500)])
    apex = euclid.angles_from_vertices(shapemap.reconstruct_array(theta, phi, 1))[:, 0]
    is_right = np.abs(apex - math.pi / 2) < 1e-9
    on_cap = np.abs(theta - math.pi / 3) < 1e-9
    assert np.array_equal(is_right, on_cap)
    assert on_cap.sum() == 500


def test_distance_across_frames():
    e = shapemap.special_point("E")
    assert shapemap.distance(e, shapemap.relabel(e, 2)) == pytest.approx(0.0, abs=1e-12)
    assert shapemap.distance(ShapeCoords(0.0), ShapeCoords(math.pi)) == pytest.approx(math.pi)
