"""Oriented 2-spheres of S^3 as points of the de Sitter quadric.

The unit sphere S^3 sits inside R^5 as the section {x5 = 1} of the light
cone C = {<x, x> = 0}; a point x in S^3 is encoded as (x, 1) with |x| = 1.
An oriented 2-sphere with centre m in S^3 and spherical radius r in (0, pi)
corresponds to the point

    sigma = (m, cos r) / sin r

of the quadric Lambda = {<sigma, sigma> = 1}.  The two orientations of one
geometric sphere are the antipodes +-sigma; both are first-class points and
are never identified.  A point y of S^3 lies on the sphere sigma iff
<sigma, (y, 1)> = 0, and the chordal/angle geometry of sphere pairs is read
off the inner product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lorentz
from .errors import (
    EmptyIntersectionError,
    NonSpacelikeSpanError,
    PreconditionError,
)
from .lorentz import CausalType, causal_type, inner

# ---------------------------------------------------------------- containers


@dataclass(frozen=True)
class CenterRadius:
    """Sphere in centre/spherical-radius form: m in S^3, r in (0, pi)."""

    center: np.ndarray  # shape (4,), |m| = 1
    radius: float


@dataclass(frozen=True)
class EuclideanSphere:
    """Sphere in R^3 (stereographic chart): centre c, radius rho > 0, sign.

    sign = +1 orients the sphere with inward-pointing normal convention
    matching sigma, -1 the opposite; flipping the sign negates sigma.
    """

    center: np.ndarray  # shape (3,)
    radius: float
    sign: int = 1


@dataclass(frozen=True)
class CircleRep:
    """A circle of S^3 as an ordered pair of sphere points cutting it.

    The span of (sigma1, sigma2) must be space-like (signature ++); the
    circle is the set of light rays Lorentz-orthogonal to that span.
    """

    sigma1: np.ndarray
    sigma2: np.ndarray


def check_sphere_point(sigma, tol=1e-9):
    """Validate <sigma, sigma> = 1; returns the array."""
    sigma = np.asarray(sigma, dtype=float)
    if abs(lorentz.sq(sigma) - 1.0) > tol:
        raise PreconditionError("not a point of the sphere quadric: <s,s> != 1")
    return sigma


# ------------------------------------------------------- basic dictionaries


def sphere_point_from_center_radius(cr: CenterRadius):
    """sigma = (m, cos r) / sin r; requires |m| = 1 and r in (0, pi)."""
    m = np.asarray(cr.center, dtype=float)
    r = float(cr.radius)
    if abs(np.linalg.norm(m) - 1.0) > 1e-9:
        raise PreconditionError("sphere centre must lie on S^3")
    if not 0.0 < r < np.pi:
        raise PreconditionError("spherical radius must lie in (0, pi)")
    return np.append(m, np.cos(r)) / np.sin(r)


def center_radius_from_sphere_point(sigma):
    """Inverse dictionary: sin r = 1/|(sigma_1..4)|, m = sigma_1..4 * sin r."""
    sigma = check_sphere_point(sigma)
    # <s,s> = |m/sin r|^2 - cot^2 r = 1 forces |sigma_spatial| = 1/sin r.
    s = 1.0 / np.linalg.norm(sigma[:4])
    r = float(np.arctan2(s, sigma[4] * s))
    return CenterRadius(center=sigma[:4] * s, radius=r)


def s3_point(x):
    """Lift a euclidean point of S^3 (shape (4,), |x| = 1) to the cone section."""
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > 1e-9:
        raise PreconditionError("not a point of S^3")
    return np.append(x, 1.0)


def point_on_sphere(sigma, x, tol=1e-9):
    """Incidence test <sigma, (x, 1)> = 0."""
    return abs(inner(sigma, s3_point(x))) <= tol


def sphere_angle(sigma1, sigma2):
    """Intersection angle of two sphere points.

    cos alpha = |<sigma1, sigma2>|; requires |<sigma1, sigma2>| <= 1
    (the spheres actually meet).  Returns the angle in [0, pi/2].
    """
    sigma1 = check_sphere_point(sigma1)
    sigma2 = check_sphere_point(sigma2)
    c = abs(inner(sigma1, sigma2))
    if c > 1.0 + 1e-9:
        raise PreconditionError("spheres do not intersect; no angle defined")
    return float(np.arccos(min(c, 1.0)))


def spheres_tangent(sigma1, sigma2, tol=1e-9):
    """Oriented tangency: <sigma1, sigma2> = 1 (with matching orientations)."""
    return abs(inner(sigma1, sigma2) - 1.0) <= tol


def nested_disjoint(sigma1, sigma2):
    """|<sigma1, sigma2>| > 1: disjoint spheres, one inside the other."""
    return abs(inner(check_sphere_point(sigma1), check_sphere_point(sigma2))) > 1.0


# ------------------------------------------------ euclidean (chart) spheres


def sphere_point_from_euclidean(es: EuclideanSphere):
    """Embed a euclidean sphere of the stereographic chart.

    With centre c and radius rho > 0,

        sigma = sign * (c / rho, (|c|^2 - rho^2 - 1) / (2 rho),
                        (|c|^2 - rho^2 + 1) / (2 rho)).

    The incidence test <sigma, lift(y)> = 0 then picks out exactly the
    points with |y - c| = rho.
    """
    c = np.asarray(es.center, dtype=float)
    rho = float(es.radius)
    if rho <= 0:
        raise PreconditionError("euclidean radius must be positive")
    cc = c @ c
    sigma = np.empty(5)
    sigma[:3] = c / rho
    sigma[3] = (cc - rho * rho - 1.0) / (2.0 * rho)
    sigma[4] = (cc - rho * rho + 1.0) / (2.0 * rho)
    return float(es.sign) * sigma


def euclidean_from_sphere_point(sigma):
    """Inverse chart dictionary; fails on spheres through the pole.

    sigma[4] - sigma[3] = 1/rho up to sign; a zero there means the sphere
    passes through the projection pole and is a plane in the chart.
    """
    sigma = check_sphere_point(sigma)
    t = sigma[4] - sigma[3]
    if abs(t) < 1e-12:
        raise PreconditionError("sphere through the projection pole (a plane in the chart)")
    rho = 1.0 / abs(t)
    sign = 1 if t > 0 else -1
    c = sigma[:3] * rho * sign
    return EuclideanSphere(center=c, radius=rho, sign=sign)


def euclidean_inner(es1: EuclideanSphere, es2: EuclideanSphere):
    """<sigma1, sigma2> from euclidean data: (rho1^2 + rho2^2 - d^2) / (2 rho1 rho2).

    Independent route to the inner product, used as a cross-check oracle.
    """
    d2 = float(np.sum((np.asarray(es1.center) - np.asarray(es2.center)) ** 2))
    val = (es1.radius**2 + es2.radius**2 - d2) / (2.0 * es1.radius * es2.radius)
    return es1.sign * es2.sign * val


# ----------------------------------------------------- stereographic charts

POLE = np.array([0.0, 0.0, 0.0, 1.0])


def stereographic_to_r3(x):
    """Project S^3 point(s) (shape (..., 4)) from the pole (0,0,0,1) to R^3.

    y = x_{1..3} / (1 - x_4); rows at the pole give non-finite entries
    (the point-at-infinity marker).
    """
    x = np.asarray(x, dtype=float)
    denom = 1.0 - x[..., 3]
    with np.errstate(divide="ignore", invalid="ignore"):
        return x[..., :3] / denom[..., None]


def stereographic_from_r3(y):
    """Inverse chart: x = (2y, |y|^2 - 1) / (|y|^2 + 1)."""
    y = np.asarray(y, dtype=float)
    n2 = np.sum(y * y, axis=-1)
    out = np.empty(y.shape[:-1] + (4,))
    out[..., :3] = 2.0 * y / (n2 + 1.0)[..., None]
    out[..., 3] = (n2 - 1.0) / (n2 + 1.0)
    return out


def lift_r3(y):
    """R^3 -> light-cone section: append the constant 1 after the chart map."""
    x = stereographic_from_r3(y)
    return np.concatenate([x, np.ones(x.shape[:-1] + (1,))], axis=-1)


# ----------------------------------------------------------------- contact


def contact_order(sigma, gamma_derivs, tol=1e-8):
    """Order of contact of a sphere with a curve on S^3 at a point.

    gamma_derivs is the list [gamma, gamma', gamma'', ...] of light-cone lift
    derivatives at the point.  The sphere has contact of order >= k iff sigma
    is Lorentz-orthogonal to gamma, ..., gamma^(k); returned is the largest
    such k (0 if the sphere misses the point entirely).  Tolerance is
    relative to ||sigma|| ||gamma^(j)|| scales.
    """
    sigma = np.asarray(sigma, dtype=float)
    ssc = np.max(np.abs(sigma))
    k = -1
    for d in gamma_derivs:
        d = np.asarray(d, dtype=float)
        scale = ssc * max(np.max(np.abs(d)), 1e-30)
        if abs(inner(sigma, d)) > tol * scale:
            break
        k += 1
    return max(k, 0)


# ----------------------------------------------------------------- circles


# Fixed generic probe vectors for the canonical circle frame.  Any vector
# with a nonzero projection onto the relevant subspace works; these have no
# rational symmetries, so the projections essentially never vanish.
_PROBES = (
    np.array([1.0, 0.6180339887498949, 0.4142135623730951,
              0.3183098861837907, 0.2718281828459045]),
    np.array([0.2, 1.0, 0.7071067811865476, 0.5773502691896258, 0.5]),
    np.array([0.3, 0.4, 1.0, 0.8414709848078965, 0.6931471805599453]),
)


def circle_frame(sigma1, sigma2):
    """Canonical Lorentz-orthonormal frame (f1, f2, f3) of a circle.

    The circle cut by the pair is the set of light directions orthogonal to
    span(sigma1, sigma2); that complement is a 3-space of signature (+,+,-).
    f3 is the normalized projection of the time axis (always time-like there,
    chosen future-pointing), f1 and f2 come from fixed generic probes, so the
    frame depends only on the plane, not on the order or choice of the pair.
    Raises NonSpacelikeSpanError unless the span is space-like.
    """
    sigma1 = check_sphere_point(sigma1)
    sigma2 = check_sphere_point(sigma2)
    try:
        basis, signature = lorentz.gram_schmidt_lorentz([sigma1, sigma2])
    except PreconditionError as e:
        raise NonSpacelikeSpanError(str(e)) from e
    if signature != (1, 1):
        raise NonSpacelikeSpanError("sphere pair does not span a space-like plane")
    u1, u2 = basis

    def proj(w):
        return w - inner(w, u1) * u1 - inner(w, u2) * u2

    w0 = proj(lorentz.E5)
    q0 = lorentz.sq(w0)
    # <P e5, P e5> <= -1 on any space-like-complement 3-space.
    if q0 >= 0:
        raise NonSpacelikeSpanError("projected time axis is not time-like")
    f3 = w0 / np.sqrt(-q0)
    if f3[4] < 0:
        f3 = -f3

    def reduce(w, prev):
        w = proj(w) + inner(proj(w), f3) * f3  # strip the f3 component
        for p in prev:
            w = w - inner(w, p) * p
        return w

    frame = []
    for _ in range(2):
        best = None
        for probe in _PROBES:
            w = reduce(probe, frame)
            q = lorentz.sq(w)
            if q > 1e-12:
                best = w / np.sqrt(q)
                break
        if best is None:
            raise NonSpacelikeSpanError("degenerate circle frame")
        frame.append(best)
    return frame[0], frame[1], f3


def circle_points(sigma1, sigma2, n=128):
    """n points of the circle cut by two spheres, as S^3 rows (n, 4).

    Light rays cos(t) f1 + sin(t) f2 + f3 sweep the circle; the section
    x5 = 1 normalization lands on S^3.  Canonical frame makes the point set
    independent of the pair's order.
    """
    f1, f2, f3 = circle_frame(sigma1, sigma2)
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    rays = np.outer(np.cos(t), f1) + np.outer(np.sin(t), f2) + f3
    return rays[:, :4] / rays[:, 4:5]


def pencil_through_circle(sigma1, sigma2, n=8):
    """Sample spheres of the pencil spanned by the pair (unit combinations).

    Every returned sphere contains the same circle.
    """
    basis, signature = lorentz.gram_schmidt_lorentz([np.asarray(sigma1, float),
                                                     np.asarray(sigma2, float)])
    if signature != (1, 1):
        raise NonSpacelikeSpanError("pencil plane must be space-like")
    u1, u2 = basis
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    return np.outer(np.cos(t), u1) + np.outer(np.sin(t), u2)


def circle_from_euclidean(center, radius, normal, n=128):
    """Points of a euclidean circle in R^3 mapped onto S^3 (oracle helper)."""
    center = np.asarray(center, dtype=float)
    normal = np.asarray(normal, dtype=float)
    normal = normal / np.linalg.norm(normal)
    a = np.array([1.0, 0.0, 0.0])
    if abs(normal @ a) > 0.9:
        a = np.array([0.0, 1.0, 0.0])
    e1 = np.cross(normal, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    pts = center + radius * (np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2))
    return stereographic_from_r3(pts)


# ------------------------------------------------------------- nestedness


def nestedness_check(samples, tol=1e-12):
    """Pairwise nestedness of a time-like family of sphere points.

    samples: rows (n, 5) on the quadric along a path whose tangent is
    time-like throughout.  Verifies |<sigma_i, sigma_j>| > 1 for every pair
    of distinct spheres (each is strictly inside or outside every other).
    Identical rows (sup-distance <= tol) are skipped.  Returns the minimal
    off-diagonal |<s_i, s_j>| (inf when all pairs are identical).
    """
    samples = np.asarray(samples, dtype=float)
    gram = (samples * lorentz.METRIC_DIAG) @ samples.T
    n = samples.shape[0]
    worst = np.inf
    for i in range(n):
        for j in range(i + 1, n):
            if np.max(np.abs(samples[i] - samples[j])) <= tol:
                continue
            worst = min(worst, abs(gram[i, j]))
    if worst <= 1.0:
        raise PreconditionError(
            f"family is not nested: found |<s_i, s_j>| = {worst:.6f} <= 1")
    return worst
