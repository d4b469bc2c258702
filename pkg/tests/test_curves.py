"""Closed space curves: spectral representation, Frenet data, vertices,
osculating spheres, light-cone lifts."""

import numpy as np
import pytest
from scipy.integrate import quad

from canalgeo import generators
from canalgeo.curves import (
    PeriodicCurve,
    arclength_reparametrize,
    bouquet_contact_oracle,
    curve_length,
    detect_vertices,
    frenet_apparatus,
    lift_to_lightcone,
    mobius_image,
    osculating_sphere,
    spectral_derivative,
)
from canalgeo.errors import (
    InflectionError,
    TooFewSamplesError,
    VertexError,
)
from canalgeo.lorentz import inner
from canalgeo.spheres import sphere_point_from_euclidean

TWO_PI = 2.0 * np.pi


def test_interpolant_reproduces_circle():
    t = np.arange(64) * (TWO_PI / 64)
    pts = 2.0 * np.stack([np.cos(t), np.sin(t), 0 * t], axis=1)
    x = PeriodicCurve(pts, TWO_PI)
    dense = np.linspace(0, TWO_PI, 517)
    vals = x.evaluate(dense)
    exact = 2.0 * np.stack([np.cos(dense), np.sin(dense), 0 * dense], axis=1)
    assert np.max(np.abs(vals - exact)) < 1e-10
    # periodicity of the evaluation
    assert np.max(np.abs(x.evaluate(0.3) - x.evaluate(0.3 + TWO_PI))) < 1e-10


def test_interpolant_constant_and_bandlimited():
    x = PeriodicCurve(np.ones((32, 3)), TWO_PI)
    assert np.max(np.abs(x.evaluate(x.grid, 1))) < 1e-10

    t16 = np.arange(16) * (TWO_PI / 16)
    t64 = np.arange(64) * (TWO_PI / 64)
    probe = np.linspace(0.1, 6.0, 97)
    a = PeriodicCurve(np.cos(t16)[:, None], TWO_PI).evaluate(probe)
    b = PeriodicCurve(np.cos(t64)[:, None], TWO_PI).evaluate(probe)
    assert np.max(np.abs(a - b)) < 1e-12


def test_too_few_samples_rejected():
    with pytest.raises(TooFewSamplesError):
        PeriodicCurve(np.zeros((8, 3)), TWO_PI)


def test_spectral_derivative_matches_analytic():
    n = 128
    t = np.arange(n) * (TWO_PI / n)
    for k in range(1, n // 4 + 1):
        d = spectral_derivative(np.sin(k * t), TWO_PI)
        assert np.max(np.abs(d - k * np.cos(k * t))) < 1e-10 * max(k, 1)


def test_arclength_reparametrize():
    x = generators.circle(radius=2.0, n=64)
    s = arclength_reparametrize(x)
    assert abs(s.period - 4 * np.pi) < 1e-9
    speeds = np.linalg.norm(s.evaluate(s.grid, 1), axis=1)
    assert np.max(np.abs(speeds - 1.0)) < 1e-7
    # idempotence on the already unit-speed output
    again = arclength_reparametrize(s)
    assert np.max(np.abs(again.samples - s.samples)) < 1e-9


def test_trefoil_length_against_quadrature():
    x = generators.trefoil(256)

    def speed(t):
        return float(np.linalg.norm(x.evaluate(t, 1)))

    oracle = sum(quad(speed, a, b, limit=200)[0]
                 for a, b in zip(np.linspace(0, TWO_PI, 9)[:-1],
                                 np.linspace(0, TWO_PI, 9)[1:]))
    length = curve_length(x)
    assert abs(length - oracle) < 1e-8 * oracle


def test_frenet_circle_and_ellipse():
    f = frenet_apparatus(generators.circle(radius=2.0, n=64))
    assert np.max(np.abs(f.k - 0.5)) < 1e-10
    assert np.max(np.abs(f.kp)) < 1e-9
    assert np.max(np.abs(f.tau)) < 1e-9

    f = frenet_apparatus(generators.ellipse(a=2.0, b=1.0, n=128))
    assert np.max(np.abs(f.tau)) < 1e-9


def test_frenet_against_pointwise_formulas():
    """Chain-rule arc-length derivatives must match the direct cross-product
    formulas k = |x'^x''| / |x'|^3 and tau = (x'^x'').x''' / |x'^x''|^2."""
    x = generators.random_closed_curve(4)
    f = frenet_apparatus(x)
    d1 = x.evaluate(x.grid, 1)
    d2 = x.evaluate(x.grid, 2)
    d3 = x.evaluate(x.grid, 3)
    cross = np.cross(d1, d2)
    k_oracle = np.linalg.norm(cross, axis=1) / np.linalg.norm(d1, axis=1) ** 3
    tau_oracle = np.sum(cross * d3, axis=1) / np.sum(cross * cross, axis=1)
    assert np.max(np.abs(f.k - k_oracle)) < 1e-9 * np.max(k_oracle)
    assert np.max(np.abs(f.tau - tau_oracle)) < 1e-9 * np.max(np.abs(tau_oracle))


def test_frenet_frame_odes():
    """T' = kN, N' = -kT + tauB, B' = -tauN with arc-length primes."""
    x = generators.trefoil(256)
    f = frenet_apparatus(x)
    for frame in (f.tangent, f.normal, f.binormal):
        assert np.max(np.abs(np.linalg.norm(frame, axis=1) - 1)) < 1e-8
    assert np.max(np.abs(np.sum(f.tangent * f.normal, axis=1))) < 1e-8
    assert np.max(np.abs(np.sum(f.normal * f.binormal, axis=1))) < 1e-8
    dT = spectral_derivative(f.tangent, TWO_PI) / f.speed[:, None]
    dN = spectral_derivative(f.normal, TWO_PI) / f.speed[:, None]
    dB = spectral_derivative(f.binormal, TWO_PI) / f.speed[:, None]
    assert np.max(np.abs(dT - f.k[:, None] * f.normal)) < 1e-6
    assert np.max(np.abs(dN + f.k[:, None] * f.tangent
                         - f.tau[:, None] * f.binormal)) < 1e-6
    assert np.max(np.abs(dB + f.tau[:, None] * f.normal)) < 1e-6


def test_inflection_rejected():
    # a figure-eight style curve with an inflection
    t = np.arange(256) * (TWO_PI / 256)
    pts = np.stack([np.sin(t), np.sin(t) * np.cos(t), 0.1 * np.sin(t)], axis=1)
    with pytest.raises(InflectionError):
        frenet_apparatus(PeriodicCurve(pts, TWO_PI))


def test_vertex_detection():
    f = frenet_apparatus(generators.circle(radius=1.0, n=64))
    rep = detect_vertices(f)
    assert not rep.vertex_free
    assert len(rep.params) == len(f.t)

    rep = detect_vertices(frenet_apparatus(generators.ellipse(2.0, 1.0, n=128)))
    assert not rep.vertex_free
    assert len(rep.params) == 4

    rep = detect_vertices(frenet_apparatus(generators.trefoil(256)))
    assert rep.vertex_free
    assert rep.min_g > rep.threshold


def test_osculating_sphere_of_spherical_curve():
    """On a round sphere every defined osculating sphere is the carrier."""
    x = generators.spherical_loop(n=256)
    f = frenet_apparatus(x)
    g = f.kp ** 2 + (f.k * f.tau) ** 2
    for t in f.t[g > 1e-3 * g.max()][::7]:
        es = osculating_sphere(f, t)
        assert np.max(np.abs(es.center)) < 1e-8
        assert abs(es.radius - 1.0) < 1e-8


def test_osculating_sphere_rejects_circle():
    f = frenet_apparatus(generators.circle(radius=1.0, n=64))
    with pytest.raises(VertexError):
        osculating_sphere(f, 0.5)


def test_osculating_sphere_contact_order_three():
    from canalgeo.conformal import contact_order_at

    x = generators.trefoil(256)
    f = frenet_apparatus(x)
    lift = lift_to_lightcone(x)
    for t in f.t[10:200:31]:
        sigma = sphere_point_from_euclidean(osculating_sphere(f, t))
        assert contact_order_at(lift, sigma, t, max_order=4, tol=1e-5) >= 3


def test_bouquet_oracle_on_osculating_circles():
    """Osculating circles meet the curve to order 2 generically and to
    order >= 3 at planar-curvature-critical points."""
    from canalgeo.curves import Circle3D

    x = generators.ellipse(a=2.0, b=1.0, n=128)
    f = frenet_apparatus(x)

    def osc_circle(i):
        center = x.samples[i] + f.normal[i] / f.k[i]
        return Circle3D(center=center, radius=1.0 / f.k[i],
                        normal=f.binormal[i])

    generic, _, _ = bouquet_contact_oracle(x, float(f.t[5]), osc_circle(5))
    assert generic == 2
    # ellipse vertices sit on the axes, t = 0 is one of them
    at_vertex, _, _ = bouquet_contact_oracle(x, float(f.t[0]), osc_circle(0))
    assert at_vertex >= 3


def test_bouquet_oracle_tangent_line():
    from canalgeo.curves import Line3D

    x = generators.trefoil(256)
    d1 = x.evaluate(0.7, 1)
    line = Line3D(point=x.evaluate(0.7), direction=d1 / np.linalg.norm(d1))
    order, _, _ = bouquet_contact_oracle(x, 0.7, line)
    assert order == 1


def test_lift_to_lightcone():
    x = generators.random_closed_curve(6)
    lift = lift_to_lightcone(x)
    vals = lift.evaluate(lift.grid)
    assert np.max(np.abs(vals[:, 4] - 1.0)) < 1e-10
    forms = np.sum(vals[:, :4] ** 2, axis=1) - vals[:, 4] ** 2
    assert np.max(np.abs(forms)) < 1e-10

    origin = PeriodicCurve(np.zeros((16, 3)), TWO_PI)
    np.testing.assert_allclose(lift_to_lightcone(origin).samples[0],
                               [0, 0, 0, -1, 1], atol=1e-12)


def test_planar_circle_lift_lies_on_a_sphere():
    """The lift of a planar circle satisfies one sphere equation
    <gamma(t), sigma> = 0 identically; the SVD null direction finds it."""
    x = generators.circle(radius=1.0, n=64)
    lift = lift_to_lightcone(x)
    vals = lift.evaluate(lift.grid)
    _, svals, vt = np.linalg.svd(vals)
    assert svals[-1] < 1e-9 * svals[0]
    sigma = np.diag([1.0, 1, 1, 1, -1]) @ vt[-1]
    assert np.max(np.abs(vals @ np.diag([1.0, 1, 1, 1, -1]) @ sigma)) < 1e-9


def test_vertex_set_is_moebius_covariant():
    """Vertices of the projected curve survive a sphere rotation upstairs."""
    x = generators.ellipse(a=2.0, b=1.0, n=128)
    tr = generators.random_sphere_rotation(3)
    # the image parametrization concentrates, so give the interpolant room
    image = mobius_image(x, tr, n_out=1024)
    rep = detect_vertices(frenet_apparatus(image))
    assert not rep.vertex_free
    assert len(rep.params) == 4
    spacing = TWO_PI / x.n
    originals = np.asarray(detect_vertices(frenet_apparatus(x)).params)
    found = np.asarray(rep.params)
    gaps = np.abs(found[:, None] - originals[None, :]) % TWO_PI
    circular = np.minimum(gaps, TWO_PI - gaps)
    assert np.max(circular.min(axis=1)) < 2 * spacing
