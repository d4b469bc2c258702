"""Closed curves as trigonometric interpolants, and their Frenet geometry.

A closed curve is stored as N uniform samples over one period L and
evaluated (any point, any derivative order) through its real FFT
coefficients.  For analytic curves this converges geometrically in N, which
is what makes the higher-derivative formulas downstream (contact, conformal
invariants) numerically honest.

Derivative conventions: primes in the Frenet sense are with respect to
euclidean arc length u; d/du = (1/|x'(t)|) d/dt, applied by the chain rule
to sample arrays, never by resampling.  Frame convention T' = k N,
N' = -k T + tau B, B' = -tau N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import spheres
from .errors import (
    InflectionError,
    IrregularCurveError,
    PreconditionError,
    TooFewSamplesError,
    TorsionZeroError,
    VertexError,
)

# ---------------------------------------------------------------- interpolant


class PeriodicCurve:
    """Trigonometric interpolant of N uniform samples of a closed curve.

    samples: array (N, d) (or (N,) for scalar data, stored as (N, 1)),
    period: L > 0.  The interpolant reproduces the samples exactly and is
    evaluated together with derivatives of any order at arbitrary parameters.
    N must be even and >= 16.
    """

    def __init__(self, samples, period):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim == 1:
            samples = samples[:, None]
        n = samples.shape[0]
        if n < 16 or n % 2 != 0:
            raise TooFewSamplesError("need an even number of samples, at least 16")
        if not np.all(np.isfinite(samples)):
            raise PreconditionError("curve samples must be finite")
        if not period > 0:
            raise PreconditionError("period must be positive")
        self.samples = samples
        self.period = float(period)
        self.n = n
        self.dim = samples.shape[1]
        self._coef = np.fft.rfft(samples, axis=0) / n
        self._freq = (2.0 * np.pi / self.period) * np.arange(self._coef.shape[0])
        w = np.full(self._coef.shape[0], 2.0)
        w[0] = 1.0
        w[-1] = 1.0  # Nyquist bin (n even)
        self._weights = w

    @property
    def grid(self):
        """The N uniform sample parameters in [0, L)."""
        return np.arange(self.n) * (self.period / self.n)

    def evaluate(self, t, order=0):
        """Value (order=0) or order-th derivative of the interpolant.

        Scalar t gives shape (d,), array t of shape (m,) gives (m, d).
        Odd-order derivatives drop the Nyquist bin (the symmetric choice,
        consistent with the grid values of the derivative interpolant).
        """
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        fac = self._weights * (1j * self._freq) ** order if order else self._weights + 0j
        if order % 2 == 1:
            fac = fac.copy()
            fac[-1] = 0.0
        phase = np.exp(1j * np.outer(tt, self._freq))
        out = (phase @ (self._coef * fac[:, None])).real
        return out[0] if scalar else out

    def resampled(self, n_new):
        """Same interpolant re-sampled on n_new uniform points.

        Upsampling to an even count goes through zero-padded FFT bins (the
        old Nyquist coefficient is halved, since it turns into an interior
        bin); other cases fall back to direct evaluation.  Both routes
        reproduce `evaluate` on the new grid to machine precision.
        """
        if n_new >= self.n and n_new % 2 == 0:
            coef = np.fft.rfft(self.samples, axis=0)
            padded = np.zeros((n_new // 2 + 1, self.dim), dtype=complex)
            padded[: coef.shape[0]] = coef
            if n_new > self.n:
                padded[coef.shape[0] - 1] *= 0.5
            vals = np.fft.irfft(padded, n=n_new, axis=0) * (n_new / self.n)
            return PeriodicCurve(vals, self.period)
        ts = np.arange(n_new) * (self.period / n_new)
        return PeriodicCurve(self.evaluate(ts), self.period)

    def derivative_grid(self, order=1):
        """Derivative sampled on the native grid (grid-to-grid FFT route)."""
        return spectral_derivative(self.samples, self.period, order)


def spectral_derivative(values, period, order=1):
    """Grid-to-grid derivative of uniformly sampled periodic data.

    values: (N,) or (N, d).  The Nyquist bin is zeroed for odd orders; this
    matches PeriodicCurve.evaluate on the grid to machine precision.
    """
    values = np.asarray(values, dtype=float)
    one_d = values.ndim == 1
    arr = values[:, None] if one_d else values
    n = arr.shape[0]
    coef = np.fft.rfft(arr, axis=0)
    freq = (2.0 * np.pi / period) * np.arange(coef.shape[0])
    coef = coef * (1j * freq[:, None]) ** order
    if order % 2 == 1 and n % 2 == 0:
        coef[-1] = 0.0
    out = np.fft.irfft(coef, n=n, axis=0)
    return out[:, 0] if one_d else out


def trig_interp(values, period, t, order=0):
    """Evaluate the trigonometric interpolant of a sample array off-grid."""
    return PeriodicCurve(values, period).evaluate(t, order)


# ----------------------------------------------------------------- arc length


class ArclengthTable:
    """Monotone map between curve parameter t and accumulated arc length s.

    Built from a speed function (default: euclidean norm of the first
    derivative) sampled on an oversampled grid; the cumulative integral is
    the exact antiderivative of the trigonometric interpolant of the speed,
    so the table inherits spectral accuracy.  Raises IrregularCurveError
    when min speed <= reg_tol * max speed.
    """

    def __init__(self, curve: PeriodicCurve, speed_fn=None, oversample=4,
                 reg_tol=1e-8):
        self.curve = curve
        default_speed = speed_fn is None
        if default_speed:
            def speed_fn(ts):
                return np.linalg.norm(curve.evaluate(ts, 1), axis=-1)
        self.speed_fn = speed_fn
        m = max(int(oversample) * curve.n, 128)
        if default_speed:
            # grid speeds through the FFT: differentiate on the native grid
            # (so the odd-order Nyquist convention matches `evaluate`), then
            # resample the derivative interpolant onto the oversampled grid
            deriv = PeriodicCurve(curve.derivative_grid(1), curve.period)
            v = np.linalg.norm(deriv.resampled(m).samples, axis=-1)
        else:
            ts = np.arange(m) * (curve.period / m)
            v = np.asarray(speed_fn(ts), dtype=float)
        vmax = v.max()
        if not np.all(np.isfinite(v)) or v.min() <= reg_tol * vmax:
            raise IrregularCurveError(
                f"parametrization is singular: min speed {v.min():.3e} "
                f"vs max {vmax:.3e}")
        coef = np.fft.rfft(v) / m
        self._mean = coef[0].real
        freq = (2.0 * np.pi / curve.period) * np.arange(coef.shape[0])
        anti = np.zeros_like(coef)
        anti[1:] = coef[1:] / (1j * freq[1:])
        w = np.full(coef.shape[0], 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        anti = anti * w
        # the antiderivative spectrum decays with the speed's smoothness;
        # dropping the dead bins keeps s_of_t cheap on large sample counts
        keep = np.abs(anti) > 1e-17 * max(float(np.abs(anti).max()), 1e-300)
        keep[0] = True
        self._anti = anti[keep]
        self._freq = freq[keep]
        self._osc0 = self._osc(np.zeros(1))[0]
        self.length = self._mean * curve.period

    def _osc(self, t):
        phase = np.exp(1j * np.outer(np.atleast_1d(t), self._freq))
        return (phase @ self._anti).real

    def s_of_t(self, t):
        """Arc length accumulated from parameter 0 to t (any real t)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        s = self._mean * tt + self._osc(tt) - self._osc0
        return float(s[0]) if scalar else s

    def t_of_s(self, s, tol=1e-13, max_iter=60):
        """Inverse of s_of_t by safeguarded Newton (monotone, speed > 0)."""
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        ss = np.atleast_1d(s).astype(float)
        wraps = np.floor(ss / self.length)
        sr = ss - wraps * self.length
        t = sr / self._mean
        lo = np.zeros_like(t)
        hi = np.full_like(t, self.curve.period)
        target_tol = tol * max(self.curve.period, 1.0)
        for _ in range(max_iter):
            f = self.s_of_t(t) - sr
            lo = np.where(f < 0, np.maximum(lo, t), lo)
            hi = np.where(f > 0, np.minimum(hi, t), hi)
            if np.max(np.abs(f)) <= target_tol * self._mean:
                break
            v = np.asarray(self.speed_fn(t), dtype=float)
            step = f / v
            tn = t - step
            bad = (tn < lo) | (tn > hi)
            tn = np.where(bad, 0.5 * (lo + hi), tn)
            t = tn
        t = t + wraps * self.curve.period
        return float(t[0]) if scalar else t


def arclength_reparametrize(curve: PeriodicCurve, speed_fn=None, n_out=None,
                            oversample=4):
    """Unit-speed resampling of a closed curve.

    Returns a new PeriodicCurve whose period is the total length and whose
    parametrization has unit speed (for the same notion of speed).  The
    original interpolant is evaluated at the inverse arc-length parameters,
    never re-fit through intermediate interpolants.
    """
    table = ArclengthTable(curve, speed_fn=speed_fn, oversample=oversample)
    if n_out is None:
        n_out = max(curve.n, 128)
    s = np.arange(n_out) * (table.length / n_out)
    ts = table.t_of_s(s)
    return PeriodicCurve(curve.evaluate(ts), table.length)


def curve_length(curve: PeriodicCurve, speed_fn=None):
    """Total length via the spectral mean of the speed (exact for the interpolant)."""
    return ArclengthTable(curve, speed_fn=speed_fn).length


# -------------------------------------------------------------------- Frenet


def frenet_pointwise(d1, d2, d3):
    """Curvature, torsion and frame from the first three derivatives.

    Rows (..., 3).  k = |x' x x''| / |x'|^3, tau = (x' x x'') . x''' / |x' x x''|^2,
    T = x'/|x'|, B = (x' x x'')/|x' x x''|, N = B x T.  No tolerance logic here;
    callers gate on |x'| and k.
    """
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    d3 = np.asarray(d3, dtype=float)
    v = np.linalg.norm(d1, axis=-1)
    cx = np.cross(d1, d2)
    ncx = np.linalg.norm(cx, axis=-1)
    k = ncx / v**3
    tau = np.sum(cx * d3, axis=-1) / ncx**2
    tvec = d1 / v[..., None]
    bvec = cx / ncx[..., None]
    nvec = np.cross(bvec, tvec)
    return k, tau, tvec, nvec, bvec


@dataclass
class FrenetData:
    """Frenet apparatus of a closed curve, sampled on the native grid.

    Arrays are indexed by the grid of `curve`.  Primes are euclidean
    arc-length derivatives (chain rule, spectral differentiation of the
    sample arrays).  `u` is accumulated arc length at the grid parameters,
    `length` the total.
    """

    curve: PeriodicCurve
    t: np.ndarray
    speed: np.ndarray
    u: np.ndarray
    length: float
    k: np.ndarray
    kp: np.ndarray
    kpp: np.ndarray
    tau: np.ndarray
    taup: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    binormal: np.ndarray
    table: ArclengthTable
    _interp: dict = field(default_factory=dict, repr=False)

    def interp(self, name, t, order=0):
        """Trig-interpolated scalar field (k, kp, kpp, tau, taup, speed) off-grid."""
        if name not in self._interp:
            self._interp[name] = PeriodicCurve(getattr(self, name), self.curve.period)
        vals = self._interp[name].evaluate(t, order)
        return vals[..., 0]


def frenet_apparatus(curve: PeriodicCurve, reg_tol=1e-8, inflection_tol=1e-8):
    """Frenet data of a closed curve in R^3.

    Requires a regular parametrization (min |x'| > reg_tol * max |x'|) and
    nonvanishing curvature (min k > inflection_tol * max k); raises
    IrregularCurveError / InflectionError otherwise.
    """
    if curve.dim != 3:
        raise PreconditionError("Frenet apparatus requires a curve in R^3")
    ts = curve.grid
    d1 = curve.derivative_grid(1)
    d2 = curve.derivative_grid(2)
    d3 = curve.derivative_grid(3)
    v = np.linalg.norm(d1, axis=-1)
    if v.min() <= reg_tol * v.max():
        raise IrregularCurveError("curve parametrization is singular")
    cx = np.cross(d1, d2)
    ncx = np.linalg.norm(cx, axis=-1)
    k = ncx / v**3
    if k.min() <= inflection_tol * k.max():
        raise InflectionError("curvature vanishes; Frenet frame undefined")
    tau = np.sum(cx * d3, axis=-1) / ncx**2
    tvec = d1 / v[:, None]
    bvec = cx / ncx[:, None]
    nvec = np.cross(bvec, tvec)
    L = curve.period
    kp = spectral_derivative(k, L) / v
    kpp = spectral_derivative(kp, L) / v
    taup = spectral_derivative(tau, L) / v
    table = ArclengthTable(curve)
    u = table.s_of_t(ts)
    return FrenetData(curve=curve, t=ts, speed=v, u=u, length=table.length,
                      k=k, kp=kp, kpp=kpp, tau=tau, taup=taup,
                      tangent=tvec, normal=nvec, binormal=bvec, table=table)


# ------------------------------------------------------------------ vertices


@dataclass(frozen=True)
class VertexReport:
    """Zeros of g = k'^2 + k^2 tau^2 on a closed curve.

    vertex_free is min g > tol * max g (relative verdict); `params` are the
    refined parameter values where g dips below the reporting threshold
    tol * max(max g, (max k)^4).  min_g is the refined global minimum.
    """

    vertex_free: bool
    params: tuple
    min_g: float
    max_g: float
    threshold: float
    tol: float


def detect_vertices(f: FrenetData, tol=1e-6):
    """Locate vertices (zeros of k'^2 + k^2 tau^2) of a closed curve.

    Grid minima of g are refined by one parabolic step through neighbouring
    samples and re-evaluated on the trig interpolant of g.  A curve of
    constant g (circle-like) reports every grid point.
    """
    g = f.kp**2 + (f.k * f.tau) ** 2
    gmax = float(g.max())
    scale = max(gmax, float(f.k.max()) ** 4)
    threshold = tol * scale
    interp = PeriodicCurve(g, f.curve.period)
    n = g.shape[0]
    h = f.curve.period / n
    params = []
    gmin = float(g.min())
    if gmax <= threshold:
        params = list(f.t)
    else:
        for i in range(n):
            gm, gc, gp = g[i - 1], g[i], g[(i + 1) % n]
            if gc <= gm and gc <= gp:
                denom = gp - 2.0 * gc + gm
                step = 0.0 if denom <= 0 else 0.5 * h * (gm - gp) / denom
                step = float(np.clip(step, -h, h))
                t_star = (f.t[i] + step) % f.curve.period
                g_star = float(interp.evaluate(t_star)[0])
                gmin = min(gmin, g_star)
                if g_star <= threshold:
                    params.append(t_star)
    # The verdict uses the scale-aware threshold: a curve whose g is pure
    # roundoff noise (circle-like, gmax itself negligible against k^4) must
    # not pass as vertex-free on the strength of a relative comparison.
    vertex_free = gmin > threshold
    return VertexReport(vertex_free=vertex_free, params=tuple(params),
                        min_g=gmin, max_g=gmax, threshold=threshold, tol=tol)


# --------------------------------------------------------- osculating sphere


def osculating_sphere(f: FrenetData, t, tau_tol=1e-10):
    """Euclidean osculating sphere of the curve at parameter t.

    centre m = x + (1/k) N - (k'/(k^2 tau)) B,
    radius rho = sqrt(1/k^2 + k'^2/(k^4 tau^2)).

    Fourth-order contact with the curve; m'(u) is parallel to B away from
    vertices.  Raises VertexError at a vertex (sphere undefined/unstable)
    and TorsionZeroError where tau vanishes (centre formula divides by it).
    """
    p = f.curve.evaluate(t)
    d1 = f.curve.evaluate(t, 1)
    d2 = f.curve.evaluate(t, 2)
    d3 = f.curve.evaluate(t, 3)
    k, tau, _, nvec, bvec = frenet_pointwise(d1, d2, d3)
    kp = f.interp("kp", t)
    g = kp * kp + (k * tau) ** 2
    if g <= 1e-12 * max(float(f.k.max()) ** 4, f.kp.max() ** 2):
        raise VertexError(f"vertex at t = {float(t):.6f}: osculating sphere unstable")
    if abs(tau) <= tau_tol * max(1.0, float(np.max(np.abs(f.tau)))):
        raise TorsionZeroError(f"tau = 0 at t = {float(t):.6f}")
    m = p + nvec / k - (kp / (k * k * tau)) * bvec
    rho = float(np.sqrt(1.0 / k**2 + kp**2 / (k**4 * tau**2)))
    return spheres.EuclideanSphere(center=m, radius=rho, sign=1)


# ----------------------------------------------------------- contact targets


@dataclass(frozen=True)
class Circle3D:
    center: np.ndarray
    radius: float
    normal: np.ndarray

    def distance(self, p):
        p = np.asarray(p, dtype=float) - self.center
        nhat = self.normal / np.linalg.norm(self.normal)
        h = p @ nhat
        radial = np.linalg.norm(p - h * nhat)
        return float(np.hypot(radial - self.radius, h))


@dataclass(frozen=True)
class Line3D:
    point: np.ndarray
    direction: np.ndarray

    def distance(self, p):
        d = self.direction / np.linalg.norm(self.direction)
        rel = np.asarray(p, dtype=float) - self.point
        return float(np.linalg.norm(rel - (rel @ d) * d))


def _target_distance(target, p):
    if isinstance(target, spheres.EuclideanSphere):
        return abs(float(np.linalg.norm(np.asarray(p) - target.center)) - target.radius)
    return target.distance(p)


def bouquet_contact_oracle(curve: PeriodicCurve, t0, target, n_scales=9,
                           h0=None):
    """Finite-difference contact order of a curve with a sphere/circle/line.

    Samples the distance from x(t0 +- h) to the target at dyadically halved
    steps and fits the vanishing order as the median of log2 ratios; contact
    order is that order minus one (distance vanishing like h^(m) means
    contact of order m - 1).  Returns (order, fitted_exponent, spread) where
    spread is the scatter of the ratio estimates.  Pure oracle: meant for
    tests, not production paths.
    """
    if h0 is None:
        h0 = curve.period / 64.0
    hs = h0 * 0.5 ** np.arange(n_scales)
    ds = []
    for h in hs:
        dp = _target_distance(target, curve.evaluate(t0 + h))
        dm = _target_distance(target, curve.evaluate(t0 - h))
        ds.append(0.5 * (dp + dm))
    ds = np.asarray(ds)
    scale = max(np.max(np.abs(curve.samples)), 1.0)
    ratios = []
    for i in range(len(ds) - 1):
        if ds[i] > 1e-13 * scale and ds[i + 1] > 1e-13 * scale:
            ratios.append(np.log2(ds[i] / ds[i + 1]))
    if not ratios:
        # distance below noise at every scale: contact beyond anything
        # measurable in double precision
        return 8, float("inf"), 0.0
    ratios = np.asarray(ratios)
    est = float(np.median(ratios))
    spread = float(np.max(np.abs(ratios - est))) if len(ratios) > 1 else 0.0
    order = int(round(est)) - 1
    return order, est, spread


# ------------------------------------------------------------------- lifting


def lift_to_lightcone(curve: PeriodicCurve, n_out=None, projective=False):
    """Light-cone lift of a closed curve in R^3.

    Default: rows (x, 1) with x in S^3 (the section x5 = 1), so
    <gamma, gamma> = 0 identically.  With projective=True the division by
    |y|^2 + 1 is skipped, returning the proportional lift
    (2y, |y|^2 - 1, |y|^2 + 1): same light rays, but a trigonometric
    polynomial whenever the curve is one, which keeps high-order spectral
    derivatives exact for constructions that only need the lift up to scale.
    """
    if curve.dim != 3:
        raise PreconditionError("light-cone lift expects a curve in R^3")
    if n_out is None:
        n_out = curve.n
    y = curve.resampled(n_out).samples if n_out != curve.n else curve.samples
    if projective:
        n2 = np.sum(y * y, axis=-1)
        rows = np.concatenate([2.0 * y, (n2 - 1.0)[:, None],
                               (n2 + 1.0)[:, None]], axis=1)
        return PeriodicCurve(rows, curve.period)
    return PeriodicCurve(spheres.lift_r3(y), curve.period)


def mobius_image(curve: PeriodicCurve, transform, n_out=None, max_chart=1e6):
    """Image of a closed curve in R^3 under an upstairs Lorentz transform.

    Lifts to the light cone, applies the transform, renormalizes to the
    section x5 = 1 and projects back through the stereographic chart.  The
    transform must be orthochronous; if the image passes too close to the
    projection pole (chart norm above max_chart) a PreconditionError is
    raised rather than returning a near-singular interpolant.
    """
    if not transform.preserves_future:
        raise PreconditionError("transform must preserve the future light cone")
    if n_out is None:
        n_out = curve.n
    pts = curve.resampled(n_out).samples if n_out != curve.n else curve.samples
    gam = spheres.lift_r3(pts)
    img = transform.apply(gam)
    sec = img[:, :4] / img[:, 4:5]
    y = spheres.stereographic_to_r3(sec)
    if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > max_chart:
        raise PreconditionError("image curve passes through the projection pole")
    return PeriodicCurve(y, curve.period)
