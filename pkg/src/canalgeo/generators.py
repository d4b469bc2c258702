"""Built-in curve and sphere-path generators used by the CLI and the tests.

Everything here is deterministic given its arguments (seeded draws use
numpy's default_rng); generators return plain package objects and never
special-case downstream checks.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import special_ortho_group

from . import canal as canal_mod
from . import lorentz
from .canal import CanalPath
from .curves import PeriodicCurve
from .errors import PreconditionError

TWO_PI = 2.0 * np.pi


# ------------------------------------------------------------------- curves


def circle(radius=1.0, n=64):
    """Planar circle in the xy plane (has vertices everywhere; inflection-free)."""
    t = np.arange(n) * (TWO_PI / n)
    pts = np.stack([radius * np.cos(t), radius * np.sin(t), np.zeros(n)], axis=1)
    return PeriodicCurve(pts, TWO_PI)


def ellipse(a=2.0, b=1.0, n=128):
    """Planar ellipse (tau = 0; four vertices)."""
    t = np.arange(n) * (TWO_PI / n)
    pts = np.stack([a * np.cos(t), b * np.sin(t), np.zeros(n)], axis=1)
    return PeriodicCurve(pts, TWO_PI)


def torus_knot(p=2, q=3, big_radius=2.0, tube_radius=1.0, n=256):
    """(p, q) torus knot: p windings around the axis, q around the tube."""
    t = np.arange(n) * (TWO_PI / n)
    ring = big_radius + tube_radius * np.cos(q * t)
    pts = np.stack([ring * np.cos(p * t), ring * np.sin(p * t),
                    tube_radius * np.sin(q * t)], axis=1)
    return PeriodicCurve(pts, TWO_PI)


def trefoil(n=256):
    """(2, 3) torus knot on the fat torus R = 2, r = 1 (vertex-free)."""
    return torus_knot(2, 3, 2.0, 1.0, n=n)


def spherical_loop(radius=1.0, wobble=0.45, n=256):
    """Closed curve on a round sphere; osculating spheres equal the carrier.

    Latitude oscillates as the longitude winds once.  The torsion of a
    spherical curve is proportional to the derivative of its geodesic
    curvature, so any closed loop on a sphere has torsion zeros; here they
    sit at the four latitude turning points, and k'^2 + k^2 tau^2 vanishes
    there with them.  Wherever that quantity is nonzero the osculating
    sphere is the carrier sphere itself.
    """
    t = np.arange(n) * (TWO_PI / n)
    polar = 0.5 * np.pi + wobble * np.sin(2.0 * t)
    pts = radius * np.stack([np.sin(polar) * np.cos(t),
                             np.sin(polar) * np.sin(t),
                             np.cos(polar)], axis=1)
    return PeriodicCurve(pts, TWO_PI)


def random_closed_curve(seed, n_modes=3, amplitude=0.5, n=256):
    """Random closed curve: unit circle plus seeded trigonometric modes."""
    rng = np.random.default_rng(seed)
    t = np.arange(n) * (TWO_PI / n)
    pts = np.stack([np.cos(t), np.sin(t), np.zeros(n)], axis=1)
    for m in range(1, n_modes + 1):
        amp = amplitude / m
        pts += amp * (rng.standard_normal(3) * np.cos(m * t)[:, None]
                      + rng.standard_normal(3) * np.sin(m * t)[:, None])
    return PeriodicCurve(pts, TWO_PI)


def random_vertex_free_curve(seed, n=512, margin=1e-3, tries=8):
    """Seeded random closed space curve that is robustly vertex-free.

    Unconstrained Fourier loops almost never survive a vertex-freeness
    filter with any real margin (a scan of 4000 draws kept 13), and curves
    that barely clear it carry torsion spikes too sharp to integrate on a
    sane grid.  So the family is built where vertex-free curves actually
    live: a torus knot with randomized winding numbers and radii, plus small
    seeded trigonometric wobble and a random rotation.  Draws whose vertex
    function dips below ``margin`` times its maximum are rejected (up to
    ``tries`` redraws from the same stream).
    """
    from .curves import detect_vertices, frenet_apparatus

    rng = np.random.default_rng(seed)
    t = np.arange(n) * (TWO_PI / n)
    for _ in range(tries):
        p, q = [(2, 3), (2, 5), (3, 4), (2, 7)][rng.integers(4)]
        if rng.random() < 0.5:
            p, q = q, p
        big = rng.uniform(2.5, 5.0)
        tube = rng.uniform(0.6, 1.3)
        ring = big + tube * np.cos(q * t)
        pts = np.stack([ring * np.cos(p * t), ring * np.sin(p * t),
                        tube * np.sin(q * t)], axis=1)
        for m in range(1, 4):
            amp = 0.05 * rng.uniform(-1, 1, (2, 3)) / m
            pts += (amp[0] * np.cos(m * t)[:, None]
                    + amp[1] * np.sin(m * t)[:, None])
        rot = special_ortho_group.rvs(3, random_state=int(rng.integers(2 ** 31)))
        x = PeriodicCurve(pts @ rot.T, TWO_PI)
        try:
            report = detect_vertices(frenet_apparatus(x))
        except Exception:
            continue
        if report.vertex_free and report.min_g / report.max_g >= margin:
            return x
    raise RuntimeError(f"no vertex-free draw for seed {seed} in {tries} tries")


# -------------------------------------------------------------- sphere paths


def great_circle_path(n=128):
    """The space-like geodesic sigma(s) = cos s e1 + sin s e2."""
    t = np.arange(n) * (TWO_PI / n)
    samples = np.zeros((n, 5))
    samples[:, 0] = np.cos(t)
    samples[:, 1] = np.sin(t)
    return CanalPath(PeriodicCurve(samples, TWO_PI))


def concentric_family(center=(0.0, 0.0, 0.0, 1.0), base_radius=None,
                      swing=0.5, n=128):
    """Spheres with one centre and oscillating radius (time-like tangent).

    r(t) = pi/2 + swing * sin t by default; any two distinct members are
    nested, and the path tangent is time-like throughout.
    """
    from . import spheres as sphere_mod
    if base_radius is None:
        base_radius = 0.5 * np.pi
    t = np.arange(n) * (TWO_PI / n)
    center = np.asarray(center, dtype=float)
    rows = [sphere_mod.sphere_point_from_center_radius(
        sphere_mod.CenterRadius(center, base_radius + swing * np.sin(tt)))
        for tt in t]
    return CanalPath(PeriodicCurve(np.array(rows), TWO_PI))


def standard_drill_frame():
    """A convenient (u, v, w) triple for minimal drills.

    u = e4 + e5 (light-like), v = e1, w = e2; pairwise orthogonal.
    """
    u = np.array([0.0, 0.0, 0.0, 1.0, 1.0])
    v = np.array([1.0, 0.0, 0.0, 0.0, 0.0])
    w = np.array([0.0, 1.0, 0.0, 0.0, 0.0])
    return u, v, w


def random_canal_path(seed, n=128, max_amplitude=0.45, n_modes=3):
    """Seeded random closed path on the quadric, biased toward canal paths.

    A random sphere circle (time-like axis vector x, orthogonal space-like
    plane) is perturbed by random low-frequency combinations of two extra
    orthogonal directions and renormalized to the quadric, then moved by a
    random Lorentz transform.  The construction guarantees nothing about the
    causal class of the result: callers must classify and filter.
    """
    rng = np.random.default_rng(seed)
    for attempt in range(32):
        raw = rng.standard_normal((5, 5))
        raw[:, 0] += np.array([0.0, 0.0, 0.0, 0.0, 2.0])  # bias first toward time-like
        try:
            basis, signature = lorentz.gram_schmidt_lorentz(list(raw.T), tol=1e-6)
        except PreconditionError:
            continue
        if signature.count(-1) != 1:
            continue
        t_idx = signature.index(-1)
        x_dir = basis[t_idx]
        rest = [basis[i] for i in range(5) if i != t_idx]
        f1, f2, g1, g2 = rest
        a = rng.uniform(0.3, 1.6)  # <x, x> = -a^2
        x = a * x_dir
        r = np.sqrt(1.0 + a * a)
        t = np.arange(n) * (TWO_PI / n)
        samples = x + r * (np.outer(np.cos(t), f1) + np.outer(np.sin(t), f2))
        amp = rng.uniform(0.0, max_amplitude)
        for m in range(1, n_modes + 1):
            for gdir in (g1, g2):
                ca, sa = rng.standard_normal(2) * amp / m
                samples += np.outer(ca * np.cos(m * t) + sa * np.sin(m * t), gdir)
        q = lorentz.sq(samples)
        if np.min(q) <= 0.1:
            continue
        samples = samples / np.sqrt(q)[:, None]
        return CanalPath(PeriodicCurve(samples, TWO_PI))
    raise RuntimeError(f"no well-conditioned draw for seed {seed}")


# --------------------------------------------------------------- transforms


def random_sphere_rotation(seed):
    """Seeded random rotation of the first four coordinates (fixes e5).

    Every such block rotation preserves the form and the future cone, and it
    acts on the round chart as an honest rotation of the 3-sphere, so images
    of curves stay as well-conditioned as their sources.  Generic boosts do
    not share that property: they pile the image up against the chart pole
    and wreck its resolution, which makes them poor test transforms even
    though they are perfectly good Lorentz maps.
    """
    block = special_ortho_group.rvs(4, random_state=seed)
    matrix = np.eye(5)
    matrix[:4, :4] = block
    return lorentz.LorentzTransform(matrix)
