"""Closed paths of spheres, their envelopes, and the length bound machinery.

A canal is the envelope of a one-parameter family of oriented spheres; the
family itself is a closed path sigma(t) on the quadric {<s, s> = 1}.  The
path is a canal path when its tangent is space-like, and the geometry of the
envelope is governed by the geodesic curvature vector

    k_g = sigma + d^2 sigma / ds^2        (s = Lorentz arc length),

computed here by the chain rule from the trigonometric interpolant.  The
causal character of k_g drives the classification (regular, drill,
almost regular, geodesic, mixed) and the 2 pi lower bound on the length of
closed almost-regular paths, with equality exactly on the light-like
constant-direction families.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import lorentz, spheres
from .curves import ArclengthTable, PeriodicCurve, arclength_reparametrize
from .errors import (
    DegenerateEnvelopeError,
    EmptyIntersectionError,
    NonSpacelikeSpanError,
    NonSpacelikeTangentError,
    PreconditionError,
)
from .lorentz import CausalType, causal_type, inner, sq
from .mesh import TriMesh

TWO_PI = 2.0 * np.pi


class CanalPath:
    """Closed path on the sphere quadric, stored as a trigonometric interpolant.

    Validates <sigma, sigma> = 1 on the sample grid to unit_tol.  No causal
    restriction is imposed here: paths with time-like tangents (nested
    families) are legal inputs for the operations that accept them.
    """

    def __init__(self, curve: PeriodicCurve, unit_tol=1e-8):
        if curve.dim != 5:
            raise PreconditionError("a sphere path must live in R^5")
        err = np.max(np.abs(lorentz.sq(curve.samples) - 1.0))
        if err > unit_tol:
            raise PreconditionError(
                f"path leaves the quadric: max |<s,s> - 1| = {err:.3e}")
        self.curve = curve
        self._table = None

    @classmethod
    def from_samples(cls, samples, period=TWO_PI, unit_tol=1e-8):
        return cls(PeriodicCurve(samples, period), unit_tol=unit_tol)

    @property
    def period(self):
        return self.curve.period

    def value(self, t, order=0):
        return self.curve.evaluate(t, order)

    def speed_sq(self, t):
        """<sigma'(t), sigma'(t)> (sign carries the causal character)."""
        return lorentz.sq(self.curve.evaluate(t, 1))

    def lorentz_speed(self, t):
        """sqrt(<sigma', sigma'>) for space-like tangents; NaN elsewhere."""
        q = self.speed_sq(t)
        with np.errstate(invalid="ignore"):
            return np.sqrt(q)

    def arclength_table(self):
        """Lorentz arc-length table; requires a space-like tangent throughout."""
        if self._table is None:
            d1 = self.curve.evaluate(self.curve.grid, 1)
            if np.min(lorentz.sq(d1)) <= 0:
                raise NonSpacelikeTangentError(
                    "arc length needs a space-like tangent everywhere")
            self._table = ArclengthTable(self.curve, speed_fn=self.lorentz_speed)
        return self._table

    def geodesic_curvature(self, t):
        """k_g = sigma + sigma_ss at parameter t (chain rule, any t shape).

        sigma_ss = sigma''/v^2 - sigma' <sigma', sigma''> / v^4 with
        v^2 = <sigma', sigma'>; requires a space-like tangent at t.
        """
        s0 = self.curve.evaluate(t)
        s1 = self.curve.evaluate(t, 1)
        s2 = self.curve.evaluate(t, 2)
        v2 = lorentz.sq(s1)
        if np.any(v2 <= 0):
            raise NonSpacelikeTangentError(
                "geodesic curvature needs a space-like tangent")
        v2 = v2[..., None] if np.ndim(v2) else v2
        dot12 = inner(s1, s2)
        dot12 = dot12[..., None] if np.ndim(dot12) else dot12
        return s0 + s2 / v2 - s1 * dot12 / v2**2

    def geodesic_curvature_at_length(self, s):
        """k_g as a function of Lorentz arc length."""
        return self.geodesic_curvature(self.arclength_table().t_of_s(s))


# ------------------------------------------------------------------- length


def path_length(path: CanalPath, rtol=1e-10):
    """Lorentz length of a closed space-like path (adaptive Gauss-Kronrod).

    Precondition: space-like tangent everywhere (relative causal check on a
    refined grid); raises NonSpacelikeTangentError otherwise.
    """
    ts = np.arange(4 * path.curve.n) * (path.period / (4 * path.curve.n))
    d1 = path.value(ts, 1)
    for row in d1:
        if causal_type(row) is not CausalType.SPACELIKE:
            raise NonSpacelikeTangentError(
                "length needs a space-like tangent everywhere")

    def f(t):
        return float(np.sqrt(lorentz.sq(path.value(t, 1))))

    val, _ = integrate.quad(f, 0.0, path.period, epsabs=1e-12, epsrel=rtol,
                            limit=200)
    return val


# ----------------------------------------------------------- classification


@dataclass(frozen=True)
class CanalClassification:
    """Causal census of a closed sphere path.

    verdict: one of regular / almost_regular / drill / geodesic / not_canal /
    mixed, by the precedence documented in classify().  tangent_types and
    kg_types count samples per causal class; margins carry the relative
    quantities the verdict was decided on.
    """

    verdict: str
    tangent_types: dict
    kg_types: dict
    margins: dict
    n_samples: int
    tol: float

    @property
    def is_almost_regular(self):
        """k_g causal and nonvanishing everywhere (bound applies)."""
        return self.verdict in ("regular", "drill", "almost_regular")


def classify(path: CanalPath, tol=1e-8, n_samples=None):
    """Classify a closed sphere path by the causal type of sigma' and k_g.

    Verdict precedence:
      - not_canal: some tangent sample is not space-like (k_g not formed);
      - geodesic: k_g = 0 everywhere;
      - regular: k_g time-like everywhere;
      - drill: k_g light-like (and nonzero) everywhere;
      - almost_regular: k_g causal (time- or light-like) everywhere, mixed;
      - mixed: anything else (includes space-like k_g anywhere).
    """
    if n_samples is None:
        n_samples = max(2 * path.curve.n, 256)
    ts = np.arange(n_samples) * (path.period / n_samples)
    d1 = path.value(ts, 1)
    ttypes = [causal_type(row, tol) for row in d1]
    tcount = _census(ttypes)
    margins = {
        "tangent_min_sq": float(np.min(lorentz.sq(d1))),
        "tangent_max_sq": float(np.max(lorentz.sq(d1))),
    }
    if any(tt is not CausalType.SPACELIKE for tt in ttypes):
        return CanalClassification(verdict="not_canal", tangent_types=tcount,
                                   kg_types={}, margins=margins,
                                   n_samples=n_samples, tol=tol)
    kg = path.geodesic_curvature(ts)
    ktypes = [causal_type(row, tol) for row in kg]
    kcount = _census(ktypes)
    kg_sq = lorentz.sq(kg)
    kg_inf = np.max(np.abs(kg), axis=-1)
    margins.update({
        "kg_min_sq": float(kg_sq.min()),
        "kg_max_sq": float(kg_sq.max()),
        "kg_min_norm": float(kg_inf.min()),
        "kg_max_norm": float(kg_inf.max()),
        "kg_max_sq_rel": float(np.max(kg_sq / np.maximum(kg_inf**2, 1e-300))),
    })
    kinds = set(ktypes)
    if kinds == {CausalType.ZERO}:
        verdict = "geodesic"
    elif kinds == {CausalType.TIMELIKE}:
        verdict = "regular"
    elif kinds == {CausalType.LIGHTLIKE}:
        verdict = "drill"
    elif kinds <= {CausalType.TIMELIKE, CausalType.LIGHTLIKE}:
        verdict = "almost_regular"
    else:
        verdict = "mixed"
    return CanalClassification(verdict=verdict, tangent_types=tcount,
                               kg_types=kcount, margins=margins,
                               n_samples=n_samples, tol=tol)


def _census(types):
    out = {}
    for tt in types:
        out[tt.value] = out.get(tt.value, 0) + 1
    return out


# --------------------------------------------------- characteristic circles


def characteristic_circle(path: CanalPath, t):
    """The circle along which the envelope touches sphere t.

    It is cut by sigma(t) and the normalized tangent sphere
    sigma'(t)/|sigma'(t)| (itself a point of the quadric); requires a
    space-like tangent at t.
    """
    s0 = path.value(t)
    s1 = path.value(t, 1)
    if causal_type(s1) is not CausalType.SPACELIKE:
        raise NonSpacelikeTangentError(
            "characteristic circle needs a space-like tangent")
    return spheres.CircleRep(sigma1=s0, sigma2=s1 / np.sqrt(sq(s1)))


def envelope_tangency_defect(path: CanalPath, t, h=1e-5, n_points=8):
    """Max |d/dt <gamma0, sigma(t)>| over points gamma0 of circle t.

    For any fixed light-cone point gamma0 of the characteristic circle the
    incidence function F(tt) = <gamma0, sigma(tt)> has F(t) = 0 = F'(t)
    (the envelope touches, not crosses).  Returns the largest central
    finite-difference |F'| over n_points circle points; a direct numeric
    witness of tangency.
    """
    rep = characteristic_circle(path, t)
    f1, f2, f3 = spheres.circle_frame(rep.sigma1, rep.sigma2)
    angles = np.arange(n_points) * (TWO_PI / n_points)
    rays = np.outer(np.cos(angles), f1) + np.outer(np.sin(angles), f2) + f3
    sp = path.value(t + h)
    sm = path.value(t - h)
    deriv = (rays @ (lorentz.METRIC_DIAG * (sp - sm))) / (2.0 * h)
    return float(np.max(np.abs(deriv)))


# ------------------------------------------------------------ envelope mesh


def _align_plane(p1, p2, g1, g2):
    """Rotate/reflect the orthonormal pair (g1, g2) to follow (p1, p2)."""
    a = inner(p1, g1)
    b = inner(p1, g2)
    r = float(np.hypot(a, b))
    if r < 1e-8:
        return g1, g2
    f1 = (a * g1 + b * g2) / r
    f2 = (-b * g1 + a * g2) / r
    if inner(f2, p2) < 0:
        f2 = -f2
    return f1, f2


def _circle_frames(path: CanalPath, ts):
    """Propagated circle frames along the path plus the seam holonomy angle."""
    frames = []
    for t in ts:
        rep = characteristic_circle(path, t)
        f1, f2, f3 = spheres.circle_frame(rep.sigma1, rep.sigma2)
        if frames:
            f1, f2 = _align_plane(frames[-1][0], frames[-1][1], f1, f2)
        frames.append((f1, f2, f3))
    rep = characteristic_circle(path, ts[0])
    g1, g2, _ = spheres.circle_frame(rep.sigma1, rep.sigma2)
    w1, w2 = _align_plane(frames[-1][0], frames[-1][1], g1, g2)
    f10, f20, _ = frames[0]
    phi = float(np.arctan2(inner(w1, f20), inner(w1, f10)))
    # orientation flip would appear as w2 opposing the rotated f20
    rot_f2 = -np.sin(phi) * f10 + np.cos(phi) * f20
    flipped = inner(w2, rot_f2) < 0
    return frames, (0.0 if flipped else phi), bool(flipped)


def _circle_points_r3(frame, angles):
    f1, f2, f3 = frame
    rays = (np.outer(np.cos(angles), f1) + np.outer(np.sin(angles), f2) + f3)
    sec = rays[:, :4] / rays[:, 4:5]
    return spheres.stereographic_to_r3(sec), sec


def envelope_mesh(path: CanalPath, nt=96, ntheta=48, chart_bound=1e7,
                  area_tol=1e-12):
    """Triangulated envelope of a closed canal path (stereographic chart).

    Sweeps the characteristic circles with propagated frames; the seam twist
    (holonomy) is distributed linearly over the rows so the mesh closes.
    Vertices too close to the projection pole (chart norm above chart_bound)
    are culled together with their triangles, and zero-area triangles are
    dropped.  Raises DegenerateEnvelopeError (carrying the circle polyline)
    when all characteristic circles coincide.
    """
    ts = np.arange(nt) * (path.period / nt)
    frames, phi, flipped = _circle_frames(path, ts)

    probe = np.array([0.0, 2.0, 4.0]) * np.pi / 3.0
    base_sec = _circle_points_r3(frames[0], probe)[1]
    spread = 0.0
    for fr in frames[1:]:
        sec = _circle_points_r3(fr, probe)[1]
        spread = max(spread, float(np.max(np.abs(sec - base_sec))))
    if spread < 1e-9:
        poly, _ = _circle_points_r3(frames[0], np.linspace(0, TWO_PI, 256,
                                                           endpoint=False))
        raise DegenerateEnvelopeError(
            "all characteristic circles coincide; envelope is a circle",
            polyline=poly)

    thetas = np.arange(ntheta) * (TWO_PI / ntheta)
    grid = np.empty((nt, ntheta, 3))
    for i, fr in enumerate(frames):
        offset = -phi * i / nt
        grid[i], _ = _circle_points_r3(fr, thetas + offset)
    flat = grid.reshape(-1, 3)
    ok = np.isfinite(flat).all(axis=1) & (np.max(np.abs(flat), axis=1) <= chart_bound)

    def vid(i, j):
        return (i % nt) * ntheta + (j % ntheta)

    faces = []
    for i in range(nt):
        for j in range(ntheta):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v11, v01 = vid(i + 1, j + 1), vid(i, j + 1)
            if ok[v00] and ok[v10] and ok[v11]:
                faces.append((v00, v10, v11))
            if ok[v00] and ok[v11] and ok[v01]:
                faces.append((v00, v11, v01))
    faces = np.asarray(faces, dtype=int)
    used = np.unique(faces)
    remap = -np.ones(len(flat), dtype=int)
    remap[used] = np.arange(len(used))
    mesh = TriMesh(flat[used], remap[faces])
    return mesh.drop_degenerate(area_tol)


# ----------------------------------------------------------------- involute


class InvolutePath:
    """phi_t(s) = cos(s + t) sigma(s) - sin(s + t) sigma_s(s), s = arc length.

    Built on the unit-speed reparametrization of a canal path.  Not periodic
    in s in general (the trigonometric factors have period 2 pi, the path
    has period equal to its length), so it is exposed as formulas, not as a
    resampled closed curve.  Its derivative is -sin(s + t) k_g(s): never
    space-like when the base path is almost regular.
    """

    def __init__(self, path: CanalPath, offset=0.0, n_out=None):
        if n_out is None:
            n_out = max(2 * path.curve.n, 256)
        self.base = arclength_reparametrize(path.curve,
                                            speed_fn=path.lorentz_speed,
                                            n_out=n_out)
        self.offset = float(offset)
        self.length = self.base.period

    def value(self, s):
        s = np.asarray(s, dtype=float)
        sig = self.base.evaluate(s)
        dsig = self.base.evaluate(s, 1)
        c = np.cos(s + self.offset)[..., None] if s.ndim else np.cos(s + self.offset)
        sn = np.sin(s + self.offset)[..., None] if s.ndim else np.sin(s + self.offset)
        return c * sig - sn * dsig

    def derivative(self, s):
        """phi' = -sin(s + t) (sigma + sigma_ss): a multiple of k_g."""
        s = np.asarray(s, dtype=float)
        kg = self.base.evaluate(s) + self.base.evaluate(s, 2)
        sn = np.sin(s + self.offset)
        sn = sn[..., None] if s.ndim else sn
        return -sn * kg

    def derivative_causal_types(self, n=64, tol=1e-8):
        ss = np.arange(n) * (self.length / n)
        return [causal_type(row, tol) for row in self.derivative(ss)]


def involute(path: CanalPath, offset=0.0, n_out=None):
    return InvolutePath(path, offset=offset, n_out=n_out)


# ----------------------------------------------------------- special canals


def dupin_cyclide_canal(x, h1, h2, n=256):
    """Circle of spheres sigma(t) = x + R (cos t f1 + sin t f2), R = sqrt(1 - <x,x>).

    (f1, f2) is the Lorentz-orthonormalization of (h1, h2), which must span a
    space-like plane orthogonal to x; requires <x, x> < 1 for a real family.
    The envelope is a Dupin cyclide; the causal type of x decides the regime
    (time-like: regular; light-like: drill with constant k_g = x; space-like
    with <x,x> < 1: mixed, bound not applicable).
    """
    x = np.asarray(x, dtype=float)
    q = float(sq(x))
    if q >= 1.0:
        raise EmptyIntersectionError("need <x, x> < 1 for a real sphere circle")
    for h in (h1, h2):
        if abs(inner(x, h)) > 1e-9 * max(1.0, np.max(np.abs(x))) * np.max(np.abs(h)):
            raise PreconditionError("plane must be Lorentz-orthogonal to x")
    basis, signature = lorentz.gram_schmidt_lorentz([np.asarray(h1, float),
                                                     np.asarray(h2, float)])
    if signature != (1, 1):
        raise NonSpacelikeSpanError("cyclide plane must be space-like")
    f1, f2 = basis
    r = np.sqrt(1.0 - q)
    ts = np.arange(max(n, 64)) * (TWO_PI / max(n, 64))
    samples = x + r * (np.outer(np.cos(ts), f1) + np.outer(np.sin(ts), f2))
    return CanalPath(PeriodicCurve(samples, TWO_PI))


def torus_canal(big_radius, tube_radius, n=128):
    """Spheres of radius r centred on a circle of radius R in the chart plane.

    The envelope is the euclidean torus (R, r); requires R > r > 0 so the
    envelope is embedded.  This is a Dupin cyclide family (time-like x).
    """
    big_r, tube_r = float(big_radius), float(tube_radius)
    if not big_r > tube_r > 0:
        raise PreconditionError("need R > r > 0 for an embedded torus")
    ts = np.arange(max(n, 64)) * (TWO_PI / max(n, 64))
    samples = np.empty((len(ts), 5))
    samples[:, 0] = big_r * np.cos(ts) / tube_r
    samples[:, 1] = big_r * np.sin(ts) / tube_r
    samples[:, 2] = 0.0
    samples[:, 3] = (big_r**2 - tube_r**2 - 1.0) / (2.0 * tube_r)
    samples[:, 4] = (big_r**2 - tube_r**2 + 1.0) / (2.0 * tube_r)
    return CanalPath(PeriodicCurve(samples, TWO_PI))


def minimal_drill(lam: PeriodicCurve, u, v, w):
    """sigma(s) = lambda(s) u + cos(s) v + sin(s) w on a light-like direction u.

    Preconditions: u light-like and nonzero, v and w unit space-like, the
    three pairwise Lorentz-orthogonal, lambda > 0 with period 2 pi.  The path
    is closed, unit-speed, of length exactly 2 pi, with
    k_g = (lambda + lambda'') u; whenever lambda + lambda'' does not vanish
    this is the equality family of the length bound (drill verdict).
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if causal_type(u) is not CausalType.LIGHTLIKE:
        raise PreconditionError("u must be light-like and nonzero")
    for name, vec in (("v", v), ("w", w)):
        if abs(sq(vec) - 1.0) > 1e-10:
            raise PreconditionError(f"{name} must be a unit space-like vector")
    for a, b in ((u, v), (u, w), (v, w)):
        if abs(inner(a, b)) > 1e-10 * np.max(np.abs(a)) * np.max(np.abs(b)):
            raise PreconditionError("u, v, w must be pairwise orthogonal")
    if abs(lam.period - TWO_PI) > 1e-9:
        raise PreconditionError("lambda must have period 2 pi")
    if lam.dim != 1:
        raise PreconditionError("lambda must be scalar")
    if np.min(lam.samples) <= 0:
        raise PreconditionError("lambda must be positive")
    n = max(lam.n, 64)
    ts = np.arange(n) * (TWO_PI / n)
    lam_vals = lam.evaluate(ts)[:, 0]
    samples = (np.outer(lam_vals, u) + np.outer(np.cos(ts), v)
               + np.outer(np.sin(ts), w))
    return CanalPath(PeriodicCurve(samples, TWO_PI))


# ------------------------------------------------------------- length bound


@dataclass(frozen=True)
class Bound2PiReport:
    """Outcome of the closed-path length bound check.

    verdict: "pass" (length >= 2 pi - tol), "fail", or "not_applicable"
    (path not almost regular; bound makes no claim).  equality_family is
    True when k_g is light-like with constant direction (the only paths
    attaining length exactly 2 pi).
    """

    verdict: str
    classification: CanalClassification
    length: float | None
    margin: float | None
    equality_family: bool
    tol: float


def verify_2pi_bound(path: CanalPath, tol=1e-6, class_tol=1e-8,
                     direction_tol=1e-6):
    """Check length(path) >= 2 pi for a closed almost-regular sphere path."""
    cls = classify(path, tol=class_tol)
    if not cls.is_almost_regular:
        # No bound to check, but the length is still informative whenever
        # the tangent is space-like (anything but not_canal).
        ell = None if cls.verdict == "not_canal" else path_length(path)
        return Bound2PiReport(verdict="not_applicable", classification=cls,
                              length=ell, margin=None, equality_family=False,
                              tol=tol)
    ell = path_length(path)
    equality = False
    if cls.verdict == "drill":
        ts = np.arange(256) * (path.period / 256)
        kg = path.geodesic_curvature(ts)
        dirs = kg / np.max(np.abs(kg), axis=-1, keepdims=True)
        equality = float(np.max(np.abs(dirs - dirs[0]))) <= direction_tol
    verdict = "pass" if ell >= TWO_PI - tol else "fail"
    return Bound2PiReport(verdict=verdict, classification=cls, length=ell,
                          margin=ell - TWO_PI, equality_family=equality,
                          tol=tol)
