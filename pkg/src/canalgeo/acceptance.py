"""Desk-scale verification battery for the whole package.

Eleven numbered checks, each self-contained and fast enough to rerun on
every change: exact lengths of the closed-form families, the randomized
2 pi length bound, contact orders of osculating spheres by two independent
oracles, the three-route omega agreement, the corollary lower bound, the
mod-2pi congruence with its Möbius invariance, the sphere-model identities,
and the two mesh audits.  A twelfth entry is a negative control: a build
with a deliberately flipped sign inside the conformal torsion must FAIL the
congruence check, which guards the suite against testing nothing.

Every floating-point quantity in a result's details is wrapped as
{"value": v, "tol": t}, t being the tolerance it was tested at (None for
purely informational values).  quick=True shrinks the randomized loops but
keeps every verdict; fixed fixtures are untouched.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import canal, conformal, curves, generators, lorentz, spheres
from .curves import PeriodicCurve

TWO_PI = 2.0 * np.pi


def measured(value, tol=None):
    """A measured float with the tolerance it was tested at.

    Reports never carry a bare float: every numeric leaf is one of these
    pairs, tol = None for purely informational values.
    """
    return {"value": float(value), "tol": None if tol is None else float(tol)}


_m = measured


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    seconds: float
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {"index": self.index, "name": self.name, "passed": self.passed,
                "seconds": _m(round(self.seconds, 3)),
                "details": self.details}

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.index:2d} {self.name} ({self.seconds:.1f}s)"


# --------------------------------------------------------------- criteria


def _c01_pencil_geodesic(quick):
    """Pencil geodesic: length 2 pi, geodesic curvature identically zero."""
    path = generators.great_circle_path()
    length = canal.path_length(path)
    ts = np.arange(512) * (TWO_PI / 512)
    kg_max = float(np.max(np.abs(path.geodesic_curvature(ts))))
    len_err = abs(length - TWO_PI)
    passed = len_err <= 1e-9 and kg_max <= 1e-8
    return passed, {"length_error": _m(len_err, 1e-9),
                    "kg_max": _m(kg_max, 1e-8),
                    "classification": canal.classify(path).verdict}


def _c02_minimal_drill(quick):
    """Minimal drill with lambda = 2 + sin: the equality family."""
    n = 256
    ts = np.arange(n) * (TWO_PI / n)
    lam = PeriodicCurve(2.0 + np.sin(ts), TWO_PI)
    u, v, w = generators.standard_drill_frame()
    path = canal.minimal_drill(lam, u, v, w)
    length = canal.path_length(path)
    cls = canal.classify(path)
    bound = canal.verify_2pi_bound(path)
    kg = path.geodesic_curvature(ts)
    target = (lam.samples[:, 0] + lam.derivative_grid(2)[:, 0])[:, None] * u
    kg_err = float(np.max(np.abs(kg - target)))
    len_err = abs(length - TWO_PI)
    passed = (len_err <= 1e-9 and cls.verdict == "drill"
              and kg_err <= 1e-7 and bound.equality_family)
    return passed, {"length_error": _m(len_err, 1e-9),
                    "classification": cls.verdict,
                    "kg_formula_error": _m(kg_err, 1e-7),
                    "equality_family": bool(bound.equality_family)}


def _c03_cyclide_regimes(quick):
    """Three Dupin-cyclide regimes: lengths 2 pi sqrt(1 - <x,x>) and verdicts."""
    e1 = np.array([1.0, 0, 0, 0, 0])
    e2 = np.array([0.0, 1, 0, 0, 0])
    e4 = np.array([0.0, 0, 0, 1, 0])
    e5 = np.array([0.0, 0, 0, 0, 1])
    cases = [("timelike", e5, 2.0 * np.pi * np.sqrt(2.0), "regular"),
             ("spacelike", 0.8 * e4, 1.2 * np.pi, "mixed"),
             ("lightlike", e4 + e5, TWO_PI, "drill")]
    details = {}
    passed = True
    for label, x, expect_len, expect_verdict in cases:
        path = canal.dupin_cyclide_canal(x, e1, e2)
        length = canal.path_length(path)
        cls = canal.classify(path)
        bound = canal.verify_2pi_bound(path)
        err = abs(length - expect_len)
        ok = err <= 1e-8 and cls.verdict == expect_verdict
        if label == "spacelike":
            # space-like k_g: the length bound does not apply and the
            # checker must say so rather than pass or fail.
            ok = ok and bound.verdict == "not_applicable"
        passed = passed and ok
        details[label] = {"length_error": _m(err, 1e-8),
                          "classification": cls.verdict,
                          "bound_verdict": bound.verdict,
                          "xx": _m(lorentz.sq(x))}
    return passed, details


def _c04_random_bound(quick):
    """Randomized length bound: every almost-regular draw is >= 2 pi."""
    count = 200 if quick else 1000
    kept = 0
    min_length = np.inf
    worst_seed = None
    for seed in range(count):
        path = generators.random_canal_path(seed)
        cls = canal.classify(path)
        if not cls.is_almost_regular:
            continue
        kept += 1
        length = canal.path_length(path)
        if length < min_length:
            min_length, worst_seed = length, seed
    passed = kept > 0 and min_length >= TWO_PI - 1e-6
    return passed, {"paths": count, "almost_regular": kept,
                    "min_length": _m(min_length, 1e-6),
                    "min_margin": _m(min_length - TWO_PI, 1e-6),
                    "min_seed": worst_seed}


def _c05_osculating_drill(quick):
    """The osculating canal of a vertex-free knot is a drill along the curve."""
    x = generators.trefoil(256)
    f = curves.frenet_apparatus(x)
    oc = conformal.osculating_canal(x, frenet=f)
    rep = conformal.drill_check(oc)
    passed = (rep.passed and rep.max_lightlike_rel < 1e-6
              and rep.max_direction_angle < 1e-6)
    return passed, {"drill_check": bool(rep.passed),
                    "tested": rep.tested_count,
                    "lightlike_rel": _m(rep.max_lightlike_rel, 1e-6),
                    "direction_angle": _m(rep.max_direction_angle, 1e-6),
                    "kg_min_norm": _m(rep.min_kg_norm)}


def _circular_gap(t, anchors, period=TWO_PI):
    if not len(anchors):
        return np.inf
    d = np.abs((np.asarray(anchors) - t + np.pi) % TWO_PI - np.pi)
    return float(d.min())


def _c06_contact_orders(quick):
    """Contact order 3 at generic points, >= 4 at spherical points, two routes."""
    x = generators.random_closed_curve(1)
    f = curves.frenet_apparatus(x)
    oc = conformal.osculating_canal(x, frenet=f, n_out=2048)
    sph = conformal.detect_spherical_points(oc, tol=1e-6)
    details = {"spherical_params": [_m(t) for t in sph.params],
               "spherical_lemma_orders": list(sph.contact_orders)}
    ok = len(sph.params) == 2 and all(o >= 4 for o in sph.contact_orders)
    bouquet_orders = []
    for tsp in sph.params:
        target = curves.osculating_sphere(f, tsp)
        order, est, _ = curves.bouquet_contact_oracle(x, tsp, target)
        bouquet_orders.append(order)
        ok = ok and order >= 4
    details["spherical_bouquet_orders"] = bouquet_orders

    rng = np.random.default_rng(7)
    cands = rng.uniform(0.0, TWO_PI, 140)
    keep = [t for t in cands if _circular_gap(t, sph.params) > 0.12]
    take = keep[: (28 if quick else 98)]
    generic_ok = 0
    for t in take:
        target = curves.osculating_sphere(f, t)
        b_order, _, _ = curves.bouquet_contact_oracle(x, t, target)
        l_order = conformal.contact_order_at(oc.lift, oc.path.value(t), t,
                                             tol=1e-5)
        if b_order == 3 and l_order == 3:
            generic_ok += 1
        else:
            ok = False
    details["generic_points"] = len(take)
    details["generic_both_order_3"] = generic_ok
    details["total_points"] = len(take) + len(sph.params)
    return ok, details


def _c07_omega_routes(quick):
    """Pointwise omega by three routes: torsion density, canal speed, spheres."""
    x = generators.torus_knot(2, 5, 4.0, 1.0, n=512)
    f = curves.frenet_apparatus(x)
    inv = conformal.conformal_invariants(x, frenet=f)
    oc = conformal.osculating_canal(x, frenet=f)
    om_frenet = inv.omega
    om_canal = oc.path.lorentz_speed(f.t) / f.speed
    om_spheres = conformal.omega_via_spheres(x, frenet=f)
    err_canal = float(np.max(np.abs(om_canal - om_frenet)))
    err_spheres = float(np.max(np.abs(om_spheres - om_frenet)))
    passed = err_canal <= 1e-6 and err_spheres <= 1e-6
    return passed, {"omega_max": _m(np.max(om_frenet)),
                    "canal_route_error": _m(err_canal, 1e-6),
                    "sphere_route_error": _m(err_spheres, 1e-6)}


def _c08_corollary_bound(quick):
    """Spherical-point-free constant-angle curve: integral |T| dt >= 2 pi."""
    gen = conformal.constant_angle_cyclide_curve(3.0, 1.0, 1, 3, n=512)
    details = {"params": list(gen.params),
               "angle": _m(gen.angle)}
    if gen.frame_defect is not None or not gen.vertex_report.vertex_free:
        details["defect"] = gen.frame_defect or "curve has vertices"
        return False, details
    details["spherical_params"] = list(gen.spherical_params)
    details["min_speed_ratio"] = _m(gen.min_speed_ratio)
    inv = conformal.conformal_invariants(gen.curve)
    margin = inv.total_abs_torsion - TWO_PI
    sign_defect = abs(abs(inv.total_torsion_conformal) - inv.total_abs_torsion)
    passed = (gen.spherical_params == () and margin >= -1e-6
              and sign_defect <= 1e-8)
    details["total_abs_torsion"] = _m(inv.total_abs_torsion)
    details["bound_margin"] = _m(margin, 1e-6)
    details["sign_defect"] = _m(sign_defect, 1e-8)
    return passed, details


def _c09_congruence(quick, mutate=False):
    """(integral T dt - integral tau du) in 2 pi Z; Möbius shifts stay in it."""
    count = 6 if quick else 20
    worst_src = 0.0
    worst_img = 0.0
    shifts = []
    failures = []
    for seed in range(count):
        x = generators.random_vertex_free_curve(seed)
        xr = x.resampled(2048)
        fr = curves.frenet_apparatus(xr)
        inv = conformal.conformal_invariants(xr, frenet=fr,
                                             _mutate_sign=mutate)
        resid = conformal.congruence_residual(inv.total_torsion_conformal,
                                              inv.total_torsion)
        worst_src = max(worst_src, resid)
        if resid > 1e-4:
            failures.append(["source", seed, _m(resid, 1e-4)])
        img_done = False
        for attempt in range(8):
            transform = generators.random_sphere_rotation(
                5000 + 31 * seed + attempt)
            try:
                img = curves.mobius_image(xr, transform, n_out=2048)
            except Exception:
                continue
            if np.max(np.abs(img.samples)) > 25:
                continue
            fi = curves.frenet_apparatus(img)
            tau_img = float(np.mean(fi.tau * fi.speed) * img.period)
            delta = tau_img - inv.total_torsion
            resid_img = conformal.congruence_residual(tau_img,
                                                      inv.total_torsion)
            worst_img = max(worst_img, resid_img)
            shifts.append(int(round(delta / TWO_PI)))
            if resid_img > 1e-4:
                failures.append(["image", seed, _m(resid_img, 1e-4)])
            img_done = True
            break
        if not img_done:
            failures.append(["no-rotation", seed, None])
    passed = not failures
    return passed, {"curves": count,
                    "worst_source_residual": _m(worst_src, 1e-4),
                    "worst_image_residual": _m(worst_img, 1e-4),
                    "winding_shifts": shifts,
                    "nonzero_shifts": [k for k in shifts if k != 0],
                    "failures": failures}


def _c10_model_identities(quick):
    """Sphere-angle vs dihedral oracle, centre/radius round trips, nestedness."""
    rng = np.random.default_rng(42)
    n_pairs = 30 if quick else 100
    worst_angle = 0.0
    made = 0
    while made < n_pairs:
        c1 = rng.uniform(-1.5, 1.5, 3)
        c2 = rng.uniform(-1.5, 1.5, 3)
        r1, r2 = rng.uniform(0.4, 2.0, 2)
        d = float(np.linalg.norm(c1 - c2))
        if d < 1e-3:
            continue
        cos_dihedral = (r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2)
        if abs(cos_dihedral) > 0.95:
            continue
        s1 = spheres.sphere_point_from_euclidean(
            spheres.EuclideanSphere(c1, r1, sign=int(rng.choice([-1, 1]))))
        s2 = spheres.sphere_point_from_euclidean(
            spheres.EuclideanSphere(c2, r2, sign=int(rng.choice([-1, 1]))))
        angle = spheres.sphere_angle(s1, s2)
        angle_euclid = float(np.arccos(abs(cos_dihedral)))
        worst_angle = max(worst_angle, abs(angle - angle_euclid))
        made += 1

    worst_rt = 0.0
    for _ in range(100):
        m = rng.standard_normal(4)
        m /= np.linalg.norm(m)
        r = rng.uniform(0.05, np.pi - 0.05)
        sigma = spheres.sphere_point_from_center_radius(
            spheres.CenterRadius(m, r))
        cr = spheres.center_radius_from_sphere_point(sigma)
        worst_rt = max(worst_rt, float(np.max(np.abs(cr.center - m))),
                       abs(cr.radius - r))
        back = spheres.sphere_point_from_center_radius(cr)
        worst_rt = max(worst_rt,
                       float(np.max(np.abs(back - sigma)))
                       / max(1.0, float(np.max(np.abs(sigma)))))

    nested_ok = True
    worst_nested = np.inf
    for fam in (generators.concentric_family(),
                generators.concentric_family(center=(0.0, 0.0, 0.6, 0.8),
                                             swing=0.3)):
        # time-like wherever the tangent is nonzero: a closed path must have
        # radius turning points, where the tangent vanishes (and roundoff
        # can land on either side of zero).
        sq = fam.speed_sq(fam.curve.grid)
        if float(np.max(sq)) > 1e-12 or float(np.median(sq)) >= 0.0:
            nested_ok = False
            continue
        try:
            worst_nested = min(worst_nested,
                               spheres.nestedness_check(fam.curve.samples))
        except Exception:
            nested_ok = False
    passed = worst_angle <= 1e-8 and worst_rt <= 1e-10 and nested_ok
    return passed, {"angle_pairs": made,
                    "worst_angle_error": _m(worst_angle, 1e-8),
                    "worst_round_trip": _m(worst_rt, 1e-10),
                    "nestedness_ok": nested_ok,
                    "min_nested_inner": _m(worst_nested)}


def _c11_mesh_fidelity(quick):
    """Envelope meshes: exact revolution torus; tube degenerate along the curve."""
    tor = canal.torus_canal(2.0, 0.7)
    mesh_t = canal.envelope_mesh(tor, nt=96, ntheta=48)
    ring = np.hypot(mesh_t.vertices[:, 0], mesh_t.vertices[:, 1])
    dist = np.abs(np.hypot(ring - 2.0, mesh_t.vertices[:, 2]) - 0.7)
    torus_err = float(dist.max())
    torus_ok = (torus_err <= 1e-6 and mesh_t.is_closed()
                and mesh_t.euler_characteristic() == 0)

    x = generators.trefoil(256)
    oc = conformal.osculating_canal(x)
    mesh_c = canal.envelope_mesh(oc.path, nt=96, ntheta=48)
    qual = mesh_c.triangle_quality()
    order = np.argsort(qual)
    worst = order[:96]
    centroids = mesh_c.vertices[mesh_c.faces[worst]].mean(axis=1)
    dense = x.resampled(4096).samples
    d2 = np.sum((centroids[:, None, :] - dense[None, :, :]) ** 2, axis=-1)
    nearest = np.argmin(d2, axis=1)
    worst_dist = float(np.sqrt(np.min(d2, axis=1)).max())
    bins = np.unique(nearest * 24 // 4096)
    coverage = int(len(bins))
    tube_ok = (float(qual[worst[0]]) < 1e-2
               and float(np.median(qual)) > 0.3
               and worst_dist <= 0.06 and coverage >= 20)
    passed = torus_ok and tube_ok
    return passed, {
        "torus": {"max_vertex_distance": _m(torus_err, 1e-6),
                  "closed": mesh_t.is_closed(),
                  "euler_characteristic": mesh_t.euler_characteristic()},
        "curvature_tube": {"min_quality": _m(qual.min(), 1e-2),
                           "median_quality": _m(np.median(qual)),
                           "worst96_max_curve_distance": _m(worst_dist, 0.06),
                           "worst96_bins_hit_of_24": coverage}}


def _c12_mutation_control(quick):
    """Negative control: a sign-flipped torsion term must break congruence."""
    count = 2 if quick else 4
    resids = []
    for seed in range(count):
        x = generators.random_vertex_free_curve(seed)
        xr = x.resampled(2048)
        fr = curves.frenet_apparatus(xr)
        inv = conformal.conformal_invariants(xr, frenet=fr, _mutate_sign=True)
        resids.append(conformal.congruence_residual(
            inv.total_torsion_conformal, inv.total_torsion))
    detected = min(resids) > 1e-2
    return detected, {"curves": count,
                      "min_mutated_residual": _m(min(resids), 1e-2),
                      "mutated_residuals": [_m(r) for r in resids],
                      "note": "pass means the mutation WAS detected"}


CRITERIA = [
    (1, "pencil geodesic length", _c01_pencil_geodesic),
    (2, "minimal drill equality family", _c02_minimal_drill),
    (3, "cyclide regimes", _c03_cyclide_regimes),
    (4, "randomized length bound", _c04_random_bound),
    (5, "osculating canal drill check", _c05_osculating_drill),
    (6, "contact orders", _c06_contact_orders),
    (7, "omega route agreement", _c07_omega_routes),
    (8, "corollary lower bound", _c08_corollary_bound),
    (9, "mod-2pi congruence", _c09_congruence),
    (10, "model identities", _c10_model_identities),
    (11, "mesh fidelity", _c11_mesh_fidelity),
]

NEGATIVE_CONTROL = (12, "mutated-torsion negative control", _c12_mutation_control)


def run_criterion(index, quick=False):
    """Run one criterion (1..11, or 12 for the negative control) by number."""
    table = {i: (name, fn) for i, name, fn in CRITERIA + [NEGATIVE_CONTROL]}
    if index not in table:
        raise KeyError(f"no criterion {index}")
    name, fn = table[index]
    start = time.perf_counter()
    passed, details = fn(quick)
    return CriterionResult(index=index, name=name, passed=bool(passed),
                           seconds=time.perf_counter() - start,
                           details=details)


def run_all(quick=False, include_control=True, progress=None):
    """Run the full battery in order; returns the list of CriterionResult."""
    indices = [i for i, _, _ in CRITERIA]
    if include_control:
        indices.append(NEGATIVE_CONTROL[0])
    results = []
    for i in indices:
        res = run_criterion(i, quick=quick)
        results.append(res)
        if progress is not None:
            progress(res)
    return results
