"""Paths in the unit quadric: lengths, geodesic curvature, classification,
characteristic circles, envelopes, involutes, and the example families."""

import numpy as np
import pytest

from canalgeo import curves, generators, spheres
from canalgeo.canal import (
    CanalPath,
    characteristic_circle,
    classify,
    dupin_cyclide_canal,
    envelope_mesh,
    envelope_tangency_defect,
    involute,
    minimal_drill,
    path_length,
    torus_canal,
    verify_2pi_bound,
)
from canalgeo.curves import PeriodicCurve
from canalgeo.errors import (
    DegenerateEnvelopeError,
    EmptyIntersectionError,
    NonSpacelikeTangentError,
)
from canalgeo.lorentz import CausalType, causal_type, inner, sq
from canalgeo.generators import standard_drill_frame

TWO_PI = 2.0 * np.pi
E = np.eye(5)


def drill_2_plus_sin(n=256):
    s = np.arange(n) * (TWO_PI / n)
    lam = PeriodicCurve((2.0 + np.sin(s))[:, None], TWO_PI)
    return minimal_drill(lam, *standard_drill_frame())


def test_geodesic_length_and_curvature():
    path = generators.great_circle_path(n=128)
    assert abs(path_length(path) - TWO_PI) < 1e-9
    kg = path.geodesic_curvature(path.curve.grid)
    assert np.max(np.abs(kg)) < 1e-8
    assert classify(path).verdict == "geodesic"


def test_minimal_drill_family():
    path = drill_2_plus_sin()
    assert abs(path_length(path) - TWO_PI) < 1e-9
    u = np.array([0.0, 0, 0, 1, 1])
    s = path.curve.grid
    kg = path.geodesic_curvature(s)
    lam = 2.0 + np.sin(s)
    lam_pp = -np.sin(s)
    expected = (lam + lam_pp)[:, None] * u
    assert np.max(np.abs(kg - expected)) < 1e-7
    assert classify(path).verdict == "drill"

    # constant and nearly-degenerate profiles stay drills
    n = 256
    sgrid = np.arange(n) * (TWO_PI / n)
    for profile in (np.ones(n), 1.0 + 0.999 * np.sin(sgrid)):
        lam_curve = PeriodicCurve(profile[:, None], TWO_PI)
        p = minimal_drill(lam_curve, *standard_drill_frame())
        assert classify(p).verdict == "drill"
        assert abs(path_length(p) - TWO_PI) < 1e-9


def test_minimal_drill_constant_profile_curvature():
    n = 128
    lam = PeriodicCurve(np.ones((n, 1)), TWO_PI)
    path = minimal_drill(lam, *standard_drill_frame())
    kg = path.geodesic_curvature(path.curve.grid)
    u = np.array([0.0, 0, 0, 1, 1])
    assert np.max(np.abs(kg - u)) < 1e-7


def test_minimal_drill_rejects_bad_frame():
    n = 128
    lam = PeriodicCurve(np.ones((n, 1)), TWO_PI)
    from canalgeo.errors import PreconditionError

    with pytest.raises(PreconditionError):
        minimal_drill(lam, E[3], E[0], E[1])  # u not light-like


def test_cyclide_regimes():
    # time-like x: radius sqrt(2), regular
    path = dupin_cyclide_canal(E[4], E[0], E[1])
    assert abs(path_length(path) - TWO_PI * np.sqrt(2)) < 1e-8
    assert classify(path).verdict == "regular"

    # space-like x: radius 0.6, k_g space-like somewhere
    path = dupin_cyclide_canal(0.8 * E[0], E[1], E[2])
    assert abs(path_length(path) - 1.2 * np.pi) < 1e-8
    kg = path.geodesic_curvature(path.curve.grid)
    kg_sq = np.array([sq(row) for row in kg])
    oracle = 0.64 + (16.0 / 15.0) ** 2
    assert np.max(np.abs(kg_sq - oracle)) < 1e-7

    # light-like x: radius 1, drill
    path = dupin_cyclide_canal(np.array([0.0, 0, 0, 1, 1]), E[0], E[1])
    assert abs(path_length(path) - TWO_PI) < 1e-8
    assert classify(path).verdict == "drill"

    with pytest.raises(EmptyIntersectionError):
        dupin_cyclide_canal(1.5 * E[0], E[1], E[2])


def test_classify_rejects_timelike_tangent():
    fam = generators.concentric_family(n=128)
    assert classify(fam).verdict == "not_canal"


def test_canal_path_identities():
    """Arc-length parametrization has unit space-like speed, and k_g is
    orthogonal to both sigma and its tangent."""
    for path in (generators.great_circle_path(128),
                 drill_2_plus_sin(),
                 dupin_cyclide_canal(E[4], E[0], E[1]),
                 generators.random_canal_path(5)):
        s = path.curve.grid
        sigma = path.curve.evaluate(s)
        norms = np.array([sq(row) for row in sigma])
        assert np.max(np.abs(norms - 1.0)) < 1e-9
        table = path.arclength_table()
        kg = path.geodesic_curvature(s)
        for i in range(0, len(s), 16):
            assert abs(inner(kg[i], sigma[i])) < 1e-6
        d1 = path.curve.evaluate(s, 1)
        for i in range(0, len(s), 16):
            assert abs(inner(kg[i], d1[i])) < 1e-6 * max(
                1.0, float(np.max(np.abs(d1[i]))))


def test_length_moebius_invariant():
    from canalgeo.lorentz import random_lorentz_transform

    path = dupin_cyclide_canal(E[4], E[0], E[1])
    base = path_length(path)
    for seed in (1, 2):
        tr = random_lorentz_transform(seed)
        moved = CanalPath(PeriodicCurve(
            path.curve.samples @ tr.matrix.T, path.curve.period))
        assert abs(path_length(moved) - base) < 1e-9 * base


def test_characteristic_circles():
    # pencil geodesic: one fixed circle
    path = generators.great_circle_path(128)
    c0 = characteristic_circle(path, 0.0)
    c1 = characteristic_circle(path, 1.3)
    pts0 = spheres.circle_points(c0.sigma1, c0.sigma2, n=32)
    pts1 = spheres.circle_points(c1.sigma1, c1.sigma2, n=32)
    d = np.linalg.norm(pts0[:, None, :] - pts1[None, :, :], axis=-1)
    assert np.max(d.min(axis=1)) < 1e-8

    # torus canal: circles sweep the revolution torus
    path = torus_canal(2.0, 0.7, n=128)
    for t in (0.0, 0.9, 2.4):
        rep = characteristic_circle(path, t)
        pts = spheres.circle_points(rep.sigma1, rep.sigma2, n=24)
        xyz = spheres.stereographic_to_r3(pts)
        ring = np.stack([np.hypot(xyz[:, 0], xyz[:, 1]) - 2.0, xyz[:, 2]],
                        axis=1)
        assert np.max(np.abs(np.linalg.norm(ring, axis=1) - 0.7)) < 1e-8


def test_envelope_tangency():
    path = torus_canal(2.0, 0.7, n=128)
    for t in (0.3, 1.7):
        assert envelope_tangency_defect(path, t) < 1e-6


def test_characteristic_circle_of_osculating_drill():
    """Characteristic circles of the osculating canal osculate the curve."""
    from canalgeo.conformal import osculating_canal
    from canalgeo.curves import bouquet_contact_oracle, Circle3D

    x = generators.trefoil(256)
    oc = osculating_canal(x)
    t0 = float(x.grid[40])
    rep = characteristic_circle(oc.path, t0)
    pts = spheres.circle_points(rep.sigma1, rep.sigma2, n=256)
    xyz = spheres.stereographic_to_r3(pts)
    # circle fit: best plane through the points, then a linear least-squares
    # center (samples are not uniform along the projected circle, so the
    # centroid is biased and unusable as a center estimate)
    mid = xyz.mean(axis=0)
    _, _, vt = np.linalg.svd(xyz - mid)
    normal = vt[-1]
    uv = (xyz - mid) @ vt[:2].T
    a = np.concatenate([2 * uv, np.ones((len(uv), 1))], axis=1)
    sol, *_ = np.linalg.lstsq(a, np.sum(uv * uv, axis=1), rcond=None)
    center = mid + sol[0] * vt[0] + sol[1] * vt[1]
    radius = float(np.sqrt(sol[2] + sol[0] ** 2 + sol[1] ** 2))
    # the characteristic circle here is the osculating circle of the curve
    f = curves.frenet_apparatus(x)
    i0 = 40
    k0 = f.k[i0]
    osc_center = x.samples[i0] + f.normal[i0] / k0
    assert np.linalg.norm(center - osc_center) < 1e-6
    assert abs(radius - 1.0 / k0) < 1e-6
    assert abs(abs(normal @ f.binormal[i0]) - 1.0) < 1e-6
    order, _, _ = bouquet_contact_oracle(
        x, t0, Circle3D(center=center, radius=radius, normal=normal))
    assert order >= 2


def test_envelope_mesh_torus():
    mesh = envelope_mesh(torus_canal(2.0, 0.7, n=128), nt=64, ntheta=32)
    ring = np.hypot(mesh.vertices[:, 0], mesh.vertices[:, 1]) - 2.0
    dist = np.abs(np.hypot(ring, mesh.vertices[:, 2]) - 0.7)
    assert np.max(dist) < 1e-6
    assert mesh.is_closed()
    assert mesh.euler_characteristic() == 0


def test_envelope_mesh_degenerate_pencil():
    with pytest.raises(DegenerateEnvelopeError) as err:
        envelope_mesh(generators.great_circle_path(128), nt=32, ntheta=16)
    assert err.value.polyline is not None


def test_envelope_rejects_timelike_path():
    with pytest.raises(NonSpacelikeTangentError):
        envelope_mesh(generators.concentric_family(n=128), nt=16, ntheta=8)


def test_involute_identities():
    # geodesic: derivative vanishes identically
    path = generators.great_circle_path(128)
    iv = involute(path, 0.0)
    s = np.linspace(0, TWO_PI, 64, endpoint=False)
    dv = np.array([iv.derivative(t) for t in s])
    assert np.max(np.abs(dv)) < 1e-8

    # minimal drill at s = pi/2, offset 0: derivative equals -k_g
    path = drill_2_plus_sin()
    iv = involute(path, 0.0)
    expected = np.array([0.0, 0, 0, -2, -2])
    assert np.max(np.abs(iv.derivative(np.pi / 2) - expected)) < 1e-6

    # derivative residual against -sin(s + t) k_g(s) along the path
    offset = 0.7
    iv = involute(path, offset)
    kg = path.geodesic_curvature_at_length(s)
    dv = np.array([iv.derivative(t) for t in s])
    expected = -np.sin(s + offset)[:, None] * kg
    assert np.max(np.abs(dv - expected)) < 1e-7


def test_involute_never_spacelike_for_almost_regular():
    for path in (drill_2_plus_sin(), dupin_cyclide_canal(E[4], E[0], E[1])):
        iv = involute(path, 0.3)
        kinds = iv.derivative_causal_types(n=96)
        assert all(k in (CausalType.TIMELIKE, CausalType.LIGHTLIKE,
                         CausalType.ZERO) for k in kinds)


def test_verify_2pi_bound_reports():
    rep = verify_2pi_bound(drill_2_plus_sin())
    assert rep.verdict == "pass"
    assert rep.equality_family
    assert abs(rep.length - TWO_PI) < 1e-9

    rep = verify_2pi_bound(dupin_cyclide_canal(E[4], E[0], E[1]))
    assert rep.verdict == "pass"
    assert not rep.equality_family
    assert rep.margin > 2.0

    rep = verify_2pi_bound(dupin_cyclide_canal(0.8 * E[0], E[1], E[2]))
    assert rep.verdict == "not_applicable"
    assert abs(rep.length - 1.2 * np.pi) < 1e-8


def test_random_canal_path_determinism():
    a = generators.random_canal_path(11)
    b = generators.random_canal_path(11)
    np.testing.assert_array_equal(a.curve.samples, b.curve.samples)
    norms = np.sum(a.curve.samples[:, :4] ** 2, axis=1) - \
        a.curve.samples[:, 4] ** 2
    assert np.max(np.abs(norms - 1.0)) < 1e-9
