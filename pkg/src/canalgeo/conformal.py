"""Osculating-sphere canals and conformal invariants of closed space curves.

For a closed vertex-free curve x in R^3 with light-cone lift gamma, the
osculating spheres form a path on the quadric,

    sigma(t) = nu(t) / sqrt(<nu, nu>),   nu = wedge4(gamma, gamma', gamma'', gamma'''),

whose Lorentz speed is the conformal 1-form omega of the curve.  The same
omega has two more routes: |T| dt with the conformal torsion T and conformal
arc-length dt = (k'^2 + k^2 tau^2)^(1/4) du, and
sqrt(|m'|^2 - rho'^2) / rho from the euclidean osculating-sphere data.  The
three routes agreeing pointwise is the load-bearing consistency check of
this module.

Sign conventions follow the Frenet frame T' = kN, N' = -kT + tauB,
B' = -tauN; primes are euclidean arc-length derivatives.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from . import lorentz, spheres
from .canal import CanalPath
from .curves import (
    FrenetData,
    PeriodicCurve,
    detect_vertices,
    frenet_apparatus,
    lift_to_lightcone,
    spectral_derivative,
)
from .errors import (
    GeometryError,
    InflectionError,
    IrregularCurveError,
    OrientationIncoherenceError,
    PreconditionError,
    TorsionZeroError,
    VertexError,
)
from .lorentz import CausalType, causal_type, inner, sq, wedge4

TWO_PI = 2.0 * math.pi


# --------------------------------------------------------- osculating canal


class OsculatingCanal:
    """The path of osculating spheres of a closed vertex-free curve.

    Fields: `source` (the R^3 curve), `lift` (its light-cone lift on the
    canal's grid), `path` (CanalPath of unit sphere points), `coherent`
    (orientation closed up with sigma(L) = +sigma(0)), `nu_norm`
    (sqrt<nu, nu> on the grid, a degeneracy diagnostic).
    """

    def __init__(self, source, lift, path, nu_norm, coherent=True):
        self.source = source
        self.lift = lift
        self.path = path
        self.nu_norm = nu_norm
        self.coherent = coherent
        self._spherical = None

    def spherical_report(self, tol=1e-6):
        if self._spherical is None or self._spherical.tol != tol:
            self._spherical = detect_spherical_points(self, tol=tol)
        return self._spherical


def osculating_canal(x: PeriodicCurve, frenet: FrenetData | None = None,
                     n_out=None, vertex_tol=1e-6):
    """Build the osculating-sphere path of a closed vertex-free curve.

    The wedge of the first four lift derivatives is normalized to the
    quadric; since nu is smooth and nonvanishing for a vertex-free curve,
    the sign is continuous automatically and only closure coherence is
    checked (an incoherent closure is raised, never repaired).
    """
    f = frenet if frenet is not None else frenet_apparatus(x)
    vrep = detect_vertices(f, tol=vertex_tol)
    if not vrep.vertex_free:
        raise VertexError(
            f"curve has vertices (min g = {vrep.min_g:.3e} <= "
            f"threshold = {vrep.threshold:.3e})")
    if n_out is None:
        n_out = max(x.n, 128)
    # The wedge only needs the lift up to a positive factor; the projective
    # lift is division-free (a trig polynomial for trig-polynomial curves),
    # which keeps the third derivative clean of spectral roundoff blowup.
    plift = lift_to_lightcone(x, n_out=n_out, projective=True)
    lift = lift_to_lightcone(x, n_out=n_out)
    ts = plift.grid
    derivs = [plift.evaluate(ts, j) for j in range(4)]
    nu = wedge4(*derivs)
    nn = sq(nu)
    scale = np.max(np.abs(nu), axis=-1) ** 4
    if np.any(nn <= 1e-24 * scale):
        raise VertexError("wedge of lift derivatives degenerates on the grid")
    sigma = nu / np.sqrt(nn)[:, None]
    dots = np.sum(sigma * np.roll(sigma, 1, axis=0), axis=1)
    if np.any(dots <= 0):
        raise OrientationIncoherenceError(
            "osculating sphere orientation cannot be chosen coherently")
    path = CanalPath(PeriodicCurve(sigma, x.period))
    return OsculatingCanal(source=x, lift=lift, path=path,
                           nu_norm=np.sqrt(nn), coherent=True)


def contact_order_at(lift: PeriodicCurve, sigma, t, max_order=5, tol=1e-8):
    """Contact order of the sphere sigma with the lifted curve at parameter t."""
    derivs = [lift.evaluate(t, j) for j in range(max_order + 1)]
    return spheres.contact_order(sigma, derivs, tol=tol)


# ------------------------------------------------------------- drill check


@dataclass(frozen=True)
class DrillCheckReport:
    """Worst-case margins of the drill property of an osculating canal.

    Tested set: grid samples where ||sigma'||_inf exceeds speed_floor times
    its maximum (spherical points excluded).  passed requires a space-like
    tangent, |<k_g, k_g>| < tol * ||k_g||_inf^2, k_g bounded away from zero,
    and the line span(k_g) within tol radians of span(gamma).
    """

    passed: bool
    vacuous: bool
    tested_count: int
    excluded_count: int
    tangent_ok: bool
    max_lightlike_rel: float
    min_kg_norm: float
    max_direction_angle: float
    tol: float
    speed_floor: float


def drill_check(oc: OsculatingCanal, tol=1e-6, speed_floor=1e-3):
    """Verify the canal of osculating spheres drills along its source curve."""
    ts = oc.path.curve.grid
    d1 = oc.path.value(ts, 1)
    vinf = np.max(np.abs(d1), axis=-1)
    vmax = float(vinf.max())
    sigma_scale = float(np.max(np.abs(oc.path.curve.samples)))
    if vmax <= 1e-12 * max(sigma_scale, 1.0):
        return DrillCheckReport(passed=True, vacuous=True, tested_count=0,
                                excluded_count=len(ts), tangent_ok=True,
                                max_lightlike_rel=0.0, min_kg_norm=0.0,
                                max_direction_angle=0.0, tol=tol,
                                speed_floor=speed_floor)
    mask = vinf > speed_floor * vmax
    tested = ts[mask]
    tangent_ok = all(causal_type(row) is CausalType.SPACELIKE for row in d1[mask])
    if not tangent_ok:
        return DrillCheckReport(passed=False, vacuous=False,
                                tested_count=int(mask.sum()),
                                excluded_count=int((~mask).sum()),
                                tangent_ok=False, max_lightlike_rel=np.inf,
                                min_kg_norm=0.0, max_direction_angle=np.inf,
                                tol=tol, speed_floor=speed_floor)
    kg = oc.path.geodesic_curvature(tested)
    kg_inf = np.max(np.abs(kg), axis=-1)
    light_rel = float(np.max(np.abs(sq(kg)) / kg_inf**2))
    gam = oc.lift.evaluate(tested)
    a = kg / np.linalg.norm(kg, axis=-1, keepdims=True)
    b = gam / np.linalg.norm(gam, axis=-1, keepdims=True)
    cosang = np.clip(np.abs(np.sum(a * b, axis=-1)), 0.0, 1.0)
    max_angle = float(np.max(np.arccos(cosang)))
    min_norm = float(kg_inf.min())
    passed = (light_rel < tol and max_angle < tol and min_norm > 0.0)
    return DrillCheckReport(passed=passed, vacuous=False,
                            tested_count=int(mask.sum()),
                            excluded_count=int((~mask).sum()),
                            tangent_ok=True, max_lightlike_rel=light_rel,
                            min_kg_norm=min_norm,
                            max_direction_angle=max_angle, tol=tol,
                            speed_floor=speed_floor)


# ------------------------------------------------------- spherical points


@dataclass(frozen=True)
class SphericalPointReport:
    """Zeros of sigma' on the osculating canal (contact >= 4 with the curve).

    params: refined parameters where ||sigma'||_inf <= tol * max;
    contact_orders: the Lemma-route contact order at each reported point;
    min_speed_ratio: global min ||sigma'||_inf / max (how close the curve
    comes to a spherical point anywhere); all_spherical flags a constant
    sigma (the curve lies on one sphere).
    """

    params: tuple
    contact_orders: tuple
    min_speed_ratio: float
    all_spherical: bool
    tol: float


def _golden_min(fun, a, b, iters=60):
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def detect_spherical_points(oc: OsculatingCanal, tol=1e-6):
    """Locate parameters where the osculating sphere is stationary.

    Grid minima of the euclidean speed of sigma are refined by golden
    section on the interpolant's derivative norm, then reported when the
    sup-norm speed falls below tol times its maximum.  Each reported point
    is cross-checked by the contact-order route (>= 4).
    """
    curve = oc.path.curve
    ts = curve.grid
    d1 = curve.evaluate(ts, 1)
    vinf = np.max(np.abs(d1), axis=-1)
    vmax = float(vinf.max())
    sigma_scale = float(np.max(np.abs(curve.samples)))
    if vmax <= 1e-12 * max(sigma_scale, 1.0):
        orders = tuple(
            contact_order_at(oc.lift, curve.evaluate(t), t, max_order=4,
                             tol=1e-5)
            for t in ts[:: max(1, len(ts) // 8)])
        return SphericalPointReport(params=tuple(ts), contact_orders=orders,
                                    min_speed_ratio=0.0, all_spherical=True,
                                    tol=tol)

    def speed2(t):
        row = curve.evaluate(t, 1)
        return float(np.sum(row * row))

    n = len(ts)
    h = curve.period / n
    e2 = np.sum(d1 * d1, axis=-1)
    params = []
    orders = []
    min_ratio = float(vinf.min()) / vmax
    for i in range(n):
        if e2[i] <= e2[i - 1] and e2[i] <= e2[(i + 1) % n]:
            if vinf[i] > math.sqrt(tol) * vmax and vinf[i] > 1e-2 * vmax:
                continue
            t_star = _golden_min(speed2, ts[i] - h, ts[i] + h) % curve.period
            row = curve.evaluate(t_star, 1)
            ratio = float(np.max(np.abs(row))) / vmax
            min_ratio = min(min_ratio, ratio)
            if ratio <= tol:
                order = contact_order_at(oc.lift, curve.evaluate(t_star),
                                         t_star, max_order=4, tol=1e-5)
                params.append(t_star)
                orders.append(order)
    return SphericalPointReport(params=tuple(params),
                                contact_orders=tuple(orders),
                                min_speed_ratio=min_ratio,
                                all_spherical=False, tol=tol)


# ------------------------------------------------------ conformal invariants


@dataclass(frozen=True)
class ConformalInvariants:
    """Per-sample conformal data of a closed vertex-free curve.

    Arrays over the curve grid: dtdu (conformal arc-length density against
    euclidean arc length), torsion (the conformal torsion T), omega (the
    density |T| dtdu, computed as |numerator|/g on its own floating path).
    Scalars: total_conformal_length = integral dt; total_torsion_conformal =
    integral T dt; total_abs_torsion = integral |T| dt; total_torsion =
    integral tau du (euclidean).
    """

    t: np.ndarray
    dtdu: np.ndarray
    torsion: np.ndarray
    omega: np.ndarray
    total_conformal_length: float
    total_torsion_conformal: float
    total_abs_torsion: float
    total_torsion: float
    vertex_report: object


def conformal_torsion_pointwise(k, kp, kpp, tau, taup, _mutate_sign=False):
    """T, dt/du and omega density from Frenet data (pointwise formulas).

    T = (2 k'^2 tau + k^2 tau^3 + k k' tau' - k k'' tau) / g^(5/4),
    dt/du = g^(1/4),  omega = |T| dt/du = |numerator| / g,
    with g = k'^2 + k^2 tau^2.  Every numerator term scales as lambda^-5
    under x -> lambda x and g^(5/4) matches, making T scale-invariant.

    _mutate_sign flips the sign of the k k'' tau term; it exists only as the
    negative-control hook for the verification suite and must stay False in
    real use.
    """
    k = np.asarray(k, dtype=float)
    kp = np.asarray(kp, dtype=float)
    kpp = np.asarray(kpp, dtype=float)
    tau = np.asarray(tau, dtype=float)
    taup = np.asarray(taup, dtype=float)
    g = kp**2 + (k * tau) ** 2
    s = 1.0 if _mutate_sign else -1.0
    num = 2.0 * kp**2 * tau + k**2 * tau**3 + k * kp * taup + s * k * kpp * tau
    torsion = num / g**1.25
    dtdu = g**0.25
    omega = np.abs(num) / g
    return torsion, dtdu, omega


def conformal_invariants(x: PeriodicCurve, frenet: FrenetData | None = None,
                         vertex_tol=1e-6, _mutate_sign=False):
    """Conformal invariants of a closed vertex-free curve in R^3.

    Smooth periodic totals (dt, T dt, tau du) use the uniform-grid mean
    (spectrally accurate); integral |T| dt is integrated adaptively with
    subdivision points at the zeros of T, where the integrand has kinks.
    """
    f = frenet if frenet is not None else frenet_apparatus(x)
    vrep = detect_vertices(f, tol=vertex_tol)
    if not vrep.vertex_free:
        raise VertexError("conformal torsion needs a vertex-free curve")
    torsion, dtdu, omega = conformal_torsion_pointwise(
        f.k, f.kp, f.kpp, f.tau, f.taup, _mutate_sign=_mutate_sign)
    L = x.period
    total_len = float(np.mean(dtdu * f.speed) * L)
    total_tau = float(np.mean(f.tau * f.speed) * L)

    # Both T totals integrate the same trig interpolant of the signed
    # density.  The grid mean is that interpolant's exact integral; when a
    # refined sign scan certifies the density never changes sign, |h| is
    # a constant sign times h and the mean applies to |h| as well.  Only a
    # density with genuine sign changes needs the adaptive pass, with the
    # kink locations handed to the integrator as breakpoints.
    dens = torsion * dtdu * f.speed
    total_T = float(np.mean(dens) * L)
    hcurve = PeriodicCurve(dens[:, None], L)

    def h(t):
        return float(hcurve.evaluate(float(t))[0])

    fine = hcurve.resampled(4 * len(dens)).samples[:, 0]
    roots = _sign_change_roots(h, fine, L)
    if not roots:
        total_abs = abs(total_T)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            total_abs, _ = integrate.quad(
                lambda t: abs(h(t)), 0.0, L, points=roots,
                epsabs=1e-12, epsrel=1e-12,
                limit=max(500, 4 * len(roots)))
    return ConformalInvariants(t=f.t, dtdu=dtdu, torsion=torsion, omega=omega,
                               total_conformal_length=total_len,
                               total_torsion_conformal=total_T,
                               total_abs_torsion=float(total_abs),
                               total_torsion=total_tau, vertex_report=vrep)


def _sign_change_roots(h, values, period):
    """Sign-change locations of a uniformly sampled periodic function."""
    n = len(values)
    step = period / n
    roots = []
    for i in range(n):
        a, b = i * step, (i + 1) * step
        fa, fb = values[i], values[(i + 1) % n]
        if fa == 0.0:
            if values[i - 1] * fb < 0:
                roots.append(float(a))
        elif fa * fb < 0:
            roots.append(float(optimize.brentq(h, a, b, xtol=1e-12)))
    return sorted(r for r in roots if 0.0 < r < period)


# ------------------------------------------------------- sphere-data omega


def omega_via_spheres(x: PeriodicCurve, frenet: FrenetData | None = None,
                      vertex_tol=1e-6, tau_tol=1e-9):
    """omega density from euclidean osculating-sphere data (third route).

    omega = sqrt(|m'(u)|^2 - rho'(u)^2) / rho(u) with m, rho the osculating
    sphere centre and radius; derivatives by the chain rule on the grid.
    Requires vertex-freeness and tau != 0 at the samples (the centre formula
    divides by tau); the radicand is clamped at zero, so exact spherical
    points return 0 rather than NaN.
    """
    f = frenet if frenet is not None else frenet_apparatus(x)
    vrep = detect_vertices(f, tol=vertex_tol)
    if not vrep.vertex_free:
        raise VertexError("osculating sphere data needs a vertex-free curve")
    if np.min(np.abs(f.tau)) <= tau_tol * max(1.0, float(np.max(np.abs(f.tau)))):
        raise TorsionZeroError("tau vanishes at a sample; centre formula branch")
    pts = x.evaluate(f.t)
    m = (pts + f.normal / f.k[:, None]
         - (f.kp / (f.k**2 * f.tau))[:, None] * f.binormal)
    rho = np.sqrt(1.0 / f.k**2 + f.kp**2 / (f.k**4 * f.tau**2))
    L = x.period
    mp = spectral_derivative(m, L) / f.speed[:, None]
    rp = spectral_derivative(rho, L) / f.speed
    rad = np.sum(mp * mp, axis=-1) - rp**2
    return np.sqrt(np.maximum(rad, 0.0)) / rho


# ----------------------------------------------------------- corollary check


@dataclass(frozen=True)
class CorollaryReport:
    """Bound, sign and congruence checks on integral omega = |integral T dt|.

    verdict: "pass" / "fail" for applicable curves (closed, vertex-free, no
    spherical points), "not_applicable" otherwise (values still reported
    when computable; vertex failures leave them None).
    """

    verdict: str
    applicable: bool
    reason: str
    total_abs_torsion: float | None
    total_torsion_conformal: float | None
    total_torsion: float | None
    bound_margin: float | None
    sign_defect: float | None
    congruence_residual: float | None
    spherical_params: tuple
    tol_bound: float
    tol_sign: float
    tol_mod: float


def congruence_residual(total_T, total_tau):
    """Distance from (integral T dt - integral tau du) to 2 pi Z."""
    delta = (total_T - total_tau) / TWO_PI
    return abs(delta - round(delta)) * TWO_PI


def corollary_check(x: PeriodicCurve, tol_bound=1e-6, tol_sign=1e-8,
                    tol_mod=1e-4, spherical_tol=1e-6,
                    frenet: FrenetData | None = None, _mutate_sign=False):
    """Check integral |T| dt >= 2 pi with the sign and mod-2pi identities."""
    f = frenet if frenet is not None else frenet_apparatus(x)
    vrep = detect_vertices(f)
    if not vrep.vertex_free:
        return CorollaryReport(verdict="not_applicable", applicable=False,
                               reason="curve has vertices",
                               total_abs_torsion=None,
                               total_torsion_conformal=None,
                               total_torsion=None, bound_margin=None,
                               sign_defect=None, congruence_residual=None,
                               spherical_params=(), tol_bound=tol_bound,
                               tol_sign=tol_sign, tol_mod=tol_mod)
    ci = conformal_invariants(x, frenet=f, _mutate_sign=_mutate_sign)
    oc = osculating_canal(x, frenet=f)
    sph = oc.spherical_report(tol=spherical_tol)
    applicable = not sph.params and not sph.all_spherical
    margin = ci.total_abs_torsion - TWO_PI
    sign_defect = abs(abs(ci.total_torsion_conformal) - ci.total_abs_torsion)
    resid = congruence_residual(ci.total_torsion_conformal, ci.total_torsion)
    if not applicable:
        verdict = "not_applicable"
    else:
        ok = (margin >= -tol_bound and sign_defect <= tol_sign
              and resid <= tol_mod)
        verdict = "pass" if ok else "fail"
    return CorollaryReport(verdict=verdict, applicable=applicable,
                           reason="" if applicable else "spherical points present",
                           total_abs_torsion=ci.total_abs_torsion,
                           total_torsion_conformal=ci.total_torsion_conformal,
                           total_torsion=ci.total_torsion,
                           bound_margin=margin, sign_defect=sign_defect,
                           congruence_residual=resid,
                           spherical_params=sph.params, tol_bound=tol_bound,
                           tol_sign=tol_sign, tol_mod=tol_mod)


# ------------------------------------------------- constant-angle generator


@dataclass(frozen=True)
class ConstantAngleCurve:
    """A (p, q) winding on the revolution torus at constant angle to meridians.

    The meridian circles are the characteristic circles of the torus canal;
    theta advances by the closed-form antiderivative of
    sqrt(R^2 - r^2)/(R + r cos phi), so the angle to every meridian equals
    atan(p sqrt(R^2 - r^2) / (q r)) exactly.  vertex_report and
    spherical_params let callers pick parameter sets where both are clean;
    spherical_params is None when the curve has vertices (detector gated),
    and both are None with frame_defect set when the winding passes through
    an inflection (the report is still returned, never an exception).
    """

    curve: PeriodicCurve
    angle: float
    params: tuple
    vertex_report: object
    spherical_params: tuple | None
    min_speed_ratio: float | None
    frame_defect: str | None = None


def constant_angle_cyclide_curve(big_radius, tube_radius, p, q, n=512,
                                 spherical_tol=1e-6):
    """Constant-angle (p, q) curve on the torus (R, r); see ConstantAngleCurve."""
    big_r, tube_r = float(big_radius), float(tube_radius)
    p, q = int(p), int(q)
    if not big_r > tube_r > 0:
        raise PreconditionError("need R > r > 0")
    if p <= 0 or q <= 0:
        raise PreconditionError(
            "need positive windings; (p, 0) and (0, q) degenerate to circles")
    if math.gcd(p, q) != 1:
        raise PreconditionError("windings must be coprime")
    s = np.arange(n) * (TWO_PI / n)
    phi = q * s
    kappa = math.sqrt((big_r - tube_r) / (big_r + tube_r))
    branch = np.floor((phi + np.pi) / TWO_PI)
    psi = phi - TWO_PI * branch
    g_val = np.pi * branch + np.arctan(kappa * np.tan(0.5 * psi))
    theta = (2.0 * p / q) * g_val
    ring = big_r + tube_r * np.cos(phi)
    pts = np.stack([ring * np.cos(theta), ring * np.sin(theta),
                    tube_r * np.sin(phi)], axis=1)
    curve = PeriodicCurve(pts, TWO_PI)
    angle = math.atan2(p * math.sqrt(big_r**2 - tube_r**2), q * tube_r)
    try:
        f = frenet_apparatus(curve)
    except (InflectionError, IrregularCurveError) as exc:
        return ConstantAngleCurve(curve=curve, angle=angle,
                                  params=(big_r, tube_r, p, q),
                                  vertex_report=None, spherical_params=None,
                                  min_speed_ratio=None, frame_defect=str(exc))
    vrep = detect_vertices(f)
    spherical = None
    min_ratio = None
    defect = None
    if vrep.vertex_free:
        try:
            oc = osculating_canal(curve, frenet=f)
            rep = oc.spherical_report(tol=spherical_tol)
            spherical = rep.params
            min_ratio = rep.min_speed_ratio
        except GeometryError as exc:
            # e.g. odd orientation monodromy of the osculating sphere on
            # (1, 1) windings; still a report, never an exception.
            defect = str(exc)
    return ConstantAngleCurve(curve=curve, angle=angle,
                              params=(big_r, tube_r, p, q),
                              vertex_report=vrep, spherical_params=spherical,
                              min_speed_ratio=min_ratio, frame_defect=defect)
