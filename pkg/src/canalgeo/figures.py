"""Static PNG summaries written next to the JSON/CSV reports.

Every function takes an output directory and returns the list of files it
wrote.  Rendering is strictly offline (Agg); nothing here is interactive,
and nothing downstream depends on these files — they are for humans looking
at a report directory.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import lorentz  # noqa: E402

DPI = 150


def _save(fig, out_dir, name):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def curve_figures(out_dir, x, frenet, invariants=None, spherical_params=(),
                  stem="curve"):
    """Curve geometry panel plus (when available) invariant densities.

    Writes <stem>_geometry.png always and <stem>_invariants.png when an
    invariants record is passed.
    """
    written = []
    pts = x.samples
    fig = plt.figure(figsize=(9, 4))
    ax = fig.add_subplot(1, 2, 1, projection="3d")
    closed = np.vstack([pts, pts[:1]])
    ax.plot(closed[:, 0], closed[:, 1], closed[:, 2], lw=1.0, color="tab:blue")
    for tsp in spherical_params:
        p = x.evaluate(tsp)
        ax.scatter(*p[:3], color="tab:red", s=25, depthshade=False)
    ax.set_title("curve (spherical points marked)" if len(spherical_params)
                 else "curve")
    ax.set_box_aspect((1, 1, 1))
    ax2 = fig.add_subplot(1, 2, 2)
    t = frenet.t
    ax2.plot(t, frenet.k, label="k", lw=1.0)
    ax2.plot(t, frenet.tau, label="tau", lw=1.0)
    ax2.axhline(0.0, color="0.7", lw=0.6)
    ax2.set_xlabel("t")
    ax2.legend(fontsize=8)
    ax2.set_title("curvature / torsion")
    fig.tight_layout()
    written.append(_save(fig, out_dir, f"{stem}_geometry.png"))

    if invariants is not None:
        fig, axes = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
        axes[0].plot(invariants.t, invariants.torsion, lw=1.0,
                     color="tab:purple")
        axes[0].axhline(0.0, color="0.7", lw=0.6)
        axes[0].set_ylabel("conformal torsion T")
        axes[1].plot(invariants.t, invariants.omega, lw=1.0,
                     color="tab:green", label="omega")
        axes[1].plot(invariants.t, invariants.dtdu, lw=1.0,
                     color="tab:orange", label="dt/du")
        for tsp in spherical_params:
            axes[1].axvline(tsp, color="tab:red", lw=0.8, ls="--")
        axes[1].set_xlabel("t")
        axes[1].legend(fontsize=8)
        axes[0].set_title(
            f"total |T| = {invariants.total_abs_torsion:.6f}, "
            f"conformal length = {invariants.total_conformal_length:.6f}")
        fig.tight_layout()
        written.append(_save(fig, out_dir, f"{stem}_invariants.png"))
    return written


def canal_figures(out_dir, path, classification=None, bound_report=None,
                  stem="canal"):
    """Causal character of k_g along the path plus the length-bound margin."""
    ts = path.curve.grid
    try:
        kg = path.geodesic_curvature(ts)
        q = lorentz.sq(kg)
    except Exception:
        q = None
    fig, ax = plt.subplots(figsize=(7, 3.2))
    if q is not None:
        ax.plot(ts, q, lw=1.0, color="tab:blue")
        ax.axhline(0.0, color="0.7", lw=0.6)
        ax.set_ylabel("<k_g, k_g>")
    else:
        ax.text(0.5, 0.5, "tangent not space-like: no k_g plot",
                ha="center", va="center", transform=ax.transAxes)
    ax.set_xlabel("t")
    bits = []
    if classification is not None:
        bits.append(f"class: {classification.verdict}")
    if bound_report is not None:
        bits.append(f"length = {bound_report.length:.6f} "
                    f"(margin {bound_report.margin:+.3e})")
    ax.set_title("  |  ".join(bits) if bits else "geodesic curvature character")
    fig.tight_layout()
    return [_save(fig, out_dir, f"{stem}_kg.png")]


def mesh_figure(out_dir, mesh, singular_points=None, stem="mesh",
                max_faces=6000):
    """Flat-shaded 3D view of a triangle mesh (subsampled for big meshes)."""
    faces = mesh.faces
    if len(faces) > max_faces:
        step = int(np.ceil(len(faces) / max_faces))
        faces = faces[::step]
    fig = plt.figure(figsize=(5.5, 5))
    ax = fig.add_subplot(projection="3d")
    ax.plot_trisurf(mesh.vertices[:, 0], mesh.vertices[:, 1],
                    mesh.vertices[:, 2], triangles=faces,
                    color="tab:blue", alpha=0.55, linewidth=0.1,
                    edgecolor="0.4")
    if singular_points is not None and len(singular_points):
        sp = np.asarray(singular_points)
        ax.plot(sp[:, 0], sp[:, 1], sp[:, 2], color="tab:red", lw=1.4)
    ax.set_box_aspect((1, 1, 1))
    ax.set_title("envelope mesh" if singular_points is None
                 else "envelope mesh (singular locus in red)")
    fig.tight_layout()
    return [_save(fig, out_dir, f"{stem}_view.png")]


def sweep_figure(out_dir, rows, stem="sweep"):
    """Scatter of the corollary data a sweep produced.

    rows: list of dicts with keys total_abs_torsion, spherical_count (and
    anything else; extras are ignored).  Rows with missing totals are
    dropped.
    """
    vals = [(r["total_abs_torsion"], r.get("spherical_count", 0))
            for r in rows if r.get("total_abs_torsion") is not None]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if vals:
        tot = np.array([v[0] for v in vals])
        nsph = np.array([v[1] for v in vals])
        free = nsph == 0
        ax.scatter(np.flatnonzero(free), tot[free], s=18, color="tab:green",
                   label="no spherical points")
        if np.any(~free):
            ax.scatter(np.flatnonzero(~free), tot[~free], s=18,
                       color="tab:red", label="spherical points present")
        ax.legend(fontsize=8)
    ax.axhline(2.0 * np.pi, color="0.4", lw=0.8, ls="--")
    ax.annotate("2 pi", xy=(0.99, 2.0 * np.pi), xycoords=("axes fraction", "data"),
                ha="right", va="bottom", fontsize=8, color="0.3")
    ax.set_xlabel("case index")
    ax.set_ylabel("integral |T| dt")
    fig.tight_layout()
    return [_save(fig, out_dir, f"{stem}_totals.png")]
