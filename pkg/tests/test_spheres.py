"""Sphere model: Lambda^4 points, center/radius charts, angles, circles."""

import numpy as np
import pytest

from canalgeo import generators
from canalgeo.errors import PreconditionError
from canalgeo.lorentz import inner, random_lorentz_transform
from canalgeo.spheres import (
    CenterRadius,
    EuclideanSphere,
    center_radius_from_sphere_point,
    circle_points,
    contact_order,
    euclidean_from_sphere_point,
    lift_r3,
    nested_disjoint,
    nestedness_check,
    sphere_angle,
    sphere_point_from_center_radius,
    sphere_point_from_euclidean,
    stereographic_from_r3,
    stereographic_to_r3,
)

E = np.eye(5)


def random_sphere_point(rng):
    m = rng.standard_normal(4)
    m /= np.linalg.norm(m)
    r = rng.uniform(0.15, np.pi - 0.15)
    return sphere_point_from_center_radius(CenterRadius(m, r))


def test_center_radius_embedding_values():
    sigma = sphere_point_from_center_radius(
        CenterRadius(np.array([0.0, 0, 0, 1]), np.pi / 2))
    np.testing.assert_allclose(sigma, [0, 0, 0, 1, 0], atol=1e-14)

    sigma = sphere_point_from_center_radius(
        CenterRadius(np.array([1.0, 0, 0, 0]), np.pi / 3))
    np.testing.assert_allclose(sigma, [2 / np.sqrt(3), 0, 0, 0, 1 / np.sqrt(3)],
                               atol=1e-14)


def test_center_radius_rejects_degenerate_radius():
    m = np.array([1.0, 0, 0, 0])
    for r in (0.0, np.pi):
        with pytest.raises(PreconditionError):
            sphere_point_from_center_radius(CenterRadius(m, r))


def test_center_radius_round_trip():
    rng = np.random.default_rng(2)
    for _ in range(100):
        sigma = random_sphere_point(rng)
        assert abs(inner(sigma, sigma) - 1.0) < 1e-12
        cr = center_radius_from_sphere_point(sigma)
        again = sphere_point_from_center_radius(cr)
        assert np.max(np.abs(again - sigma)) < 1e-10
        assert 0.0 < cr.radius < np.pi
        assert abs(np.linalg.norm(cr.center) - 1.0) < 1e-10


def test_sphere_angle_examples():
    alpha = sphere_angle(E[3] + 0.0, E[0] + 0.0)
    assert abs(alpha - np.pi / 2) < 1e-14
    assert sphere_angle(E[3], E[3]) == 0.0


def test_concentric_spheres_are_disjoint():
    m = np.array([0.0, 0, 0, 1])
    s1 = sphere_point_from_center_radius(CenterRadius(m, np.pi / 3))
    s2 = sphere_point_from_center_radius(CenterRadius(m, np.pi / 2))
    assert nested_disjoint(s1, s2)
    assert abs(abs(inner(s1, s2)) - 2 / np.sqrt(3)) < 1e-12


def test_angle_matches_euclidean_dihedral():
    """arccos|<s1,s2>| equals the dihedral angle of the projected spheres,
    computed from centers and radii by the law of cosines."""
    rng = np.random.default_rng(42)
    tested = 0
    while tested < 100:
        c1, c2 = rng.uniform(-1.5, 1.5, (2, 3))
        r1, r2 = rng.uniform(0.3, 1.8, 2)
        d = np.linalg.norm(c1 - c2)
        cos_dihedral = (r1 ** 2 + r2 ** 2 - d ** 2) / (2 * r1 * r2)
        if abs(cos_dihedral) > 0.95:
            continue
        s1 = sphere_point_from_euclidean(EuclideanSphere(c1, r1))
        s2 = sphere_point_from_euclidean(EuclideanSphere(c2, r2))
        alpha = sphere_angle(s1, s2)
        assert abs(alpha - np.arccos(abs(cos_dihedral))) < 1e-8
        tested += 1


def test_angle_is_moebius_invariant():
    rng = np.random.default_rng(9)
    for seed in range(10):
        tr = random_lorentz_transform(200 + seed)
        s1, s2 = random_sphere_point(rng), random_sphere_point(rng)
        if abs(inner(s1, s2)) > 0.99:
            continue
        before = sphere_angle(s1, s2)
        after = sphere_angle(tr.apply(s1), tr.apply(s2))
        assert abs(before - after) < 1e-9


def test_circle_points_on_both_spheres():
    s1, s2 = E[3] + 0.0, E[0] + 0.0
    pts = circle_points(s1, s2, n=32)
    assert pts.shape == (32, 4)
    # great spheres x4 = 0 and x1 = 0
    assert np.max(np.abs(pts[:, 3])) < 1e-9
    assert np.max(np.abs(pts[:, 0])) < 1e-9
    lifts = np.concatenate([pts, np.ones((32, 1))], axis=1)
    for sigma in (s1, s2):
        assert np.max(np.abs(lifts @ np.diag([1, 1, 1, 1, -1]) @ sigma)) < 1e-9


def test_circle_points_single_and_reversed():
    rng = np.random.default_rng(3)
    s1, s2 = random_sphere_point(rng), random_sphere_point(rng)
    one = circle_points(s1, s2, n=1)
    assert one.shape == (1, 4)
    many = circle_points(s1, s2, n=64)
    swapped = circle_points(s2, s1, n=64)
    # same point set up to traversal order
    d = np.linalg.norm(many[:, None, :] - swapped[None, :, :], axis=-1)
    assert np.max(d.min(axis=1)) < 1e-9


def test_circle_points_rejects_degenerate_span():
    s1 = sphere_point_from_center_radius(
        CenterRadius(np.array([0.0, 0, 0, 1]), np.pi / 3))
    s2 = sphere_point_from_center_radius(
        CenterRadius(np.array([0.0, 0, 0, 1]), np.pi / 2))
    with pytest.raises(PreconditionError):
        circle_points(s1, s2, n=8)


def test_stereographic_projection():
    np.testing.assert_allclose(stereographic_to_r3(np.array([0.0, 0, 0, -1])),
                               [0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(stereographic_to_r3(np.array([1.0, 0, 0, 0])),
                               [1, 0, 0], atol=1e-14)
    pole_image = stereographic_to_r3(np.array([0.0, 0, 0, 1]))
    assert not np.all(np.isfinite(pole_image))

    rng = np.random.default_rng(8)
    y = rng.standard_normal((20, 3))
    back = stereographic_to_r3(stereographic_from_r3(y))
    assert np.max(np.abs(back - y)) < 1e-10


def test_sphere_from_euclidean():
    sigma = sphere_point_from_euclidean(EuclideanSphere(np.zeros(3), 1.0))
    np.testing.assert_allclose(sigma, [0, 0, 0, -1, 0], atol=1e-14)

    rng = np.random.default_rng(21)
    for _ in range(25):
        center = rng.uniform(-2, 2, 3)
        radius = rng.uniform(0.2, 2.5)
        sigma = sphere_point_from_euclidean(EuclideanSphere(center, radius))
        assert abs(inner(sigma, sigma) - 1.0) < 1e-12
        # sampled euclidean points of the sphere lift onto sigma-perp
        theta = rng.uniform(0, 2 * np.pi, 8)
        phi = rng.uniform(0.2, np.pi - 0.2, 8)
        pts = center + radius * np.stack(
            [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta),
             np.cos(phi)], axis=1)
        for y in pts:
            assert abs(inner(lift_r3(y), sigma)) < 1e-9


def test_euclidean_round_trip():
    rng = np.random.default_rng(31)
    for _ in range(30):
        es = EuclideanSphere(rng.uniform(-2, 2, 3), rng.uniform(0.2, 2.0))
        back = euclidean_from_sphere_point(sphere_point_from_euclidean(es))
        assert np.max(np.abs(back.center - es.center)) < 1e-9
        assert abs(back.radius - es.radius) < 1e-9


def test_contact_order_full_partial_none():
    """A curve staying on a sphere has contact of every order; a transverse
    sphere through the point has order 0."""
    x = generators.spherical_loop(n=128)
    from canalgeo.curves import lift_to_lightcone

    lift = lift_to_lightcone(x)
    carrier = sphere_point_from_euclidean(EuclideanSphere(np.zeros(3), 1.0))
    t0 = lift.grid[5]
    derivs = [lift.evaluate(t0, j) for j in range(5)]
    assert contact_order(carrier, derivs) >= 4

    # a sphere through the point but transverse to the curve: order 0
    point = x.samples[5]
    offset = np.array([0.6, 0.3, 0.2])
    transverse = sphere_point_from_euclidean(
        EuclideanSphere(point + offset, float(np.linalg.norm(offset))))
    assert contact_order(transverse, derivs) == 0


def test_nestedness_of_concentric_family():
    fam = generators.concentric_family(n=96)
    worst = nestedness_check(fam.curve.samples)
    assert worst > 1.0
    # constant path: identical rows are skipped, vacuously nested
    const = np.tile(fam.curve.samples[0], (8, 1))
    assert nestedness_check(const) == np.inf


def test_nestedness_rejects_spacelike_path():
    path = generators.great_circle_path(n=64)
    with pytest.raises(PreconditionError):
        nestedness_check(path.curve.samples)
