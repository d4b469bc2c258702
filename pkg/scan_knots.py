"""Scan torus knots for a tau-bounded, vertex-free criterion-7 test curve."""
import time

import numpy as np

from canalgeo import conformal, curves, generators

CANDS = [(2, 3, 3.0, 0.5), (2, 3, 3.0, 1.0), (2, 3, 4.0, 1.0),
         (2, 3, 2.5, 0.5), (2, 3, 5.0, 1.0), (3, 2, 3.0, 1.0),
         (2, 5, 4.0, 1.0)]

for (p, q, R, r) in CANDS:
    for n in (256, 512):
        x = generators.torus_knot(p, q, R, r, n=n)
        f = curves.frenet_apparatus(x)
        tau = f.tau
        tmin, tmax = float(np.min(np.abs(tau))), float(np.max(np.abs(tau)))
        single = bool(np.all(tau > 0) or np.all(tau < 0))
        vr = curves.detect_vertices(f)
        T, dtdu, om = conformal.conformal_torsion_pointwise(f.k, f.kp, f.kpp, f.tau, f.taup)
        if not single:
            print(f"({p},{q},R={R},r={r}) n={n}: tau in [{tau.min():+.3f},{tau.max():+.3f}]"
                  f" NOT single-signed; vfree={vr.vertex_free}")
            continue
        t0 = time.time()
        oc = conformal.osculating_canal(x, frenet=f)
        om_canal = oc.path.lorentz_speed(f.t)
        err_canal = float(np.max(np.abs(om_canal - om)) / max(np.max(np.abs(om)), 1e-30))
        try:
            om_sph = conformal.omega_via_spheres(x, f)
            err_sph = float(np.max(np.abs(om_sph - om)) / max(np.max(np.abs(om)), 1e-30))
        except Exception as e:
            err_sph = float("nan")
            print("   spheres route error:", e)
        dt = time.time() - t0
        print(f"({p},{q},R={R},r={r}) n={n}: |tau| in [{tmin:.3f},{tmax:.3f}]"
              f" vfree={vr.vertex_free} ming/maxg={vr.min_g / max(vr.max_g, 1e-300):.2e}"
              f" canal_err={err_canal:.2e} sph_err={err_sph:.2e} ({dt:.1f}s)")
