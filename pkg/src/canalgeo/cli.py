"""Command-line front end.

One binary, subcommand style:

    canalgeo analyze-curve  --generator trefoil --out-json report.json
    canalgeo analyze-canal  --generator minimal-drill --lam "2+sin"
    canalgeo analyze-canal  --generator random --seed 7 --count 100 \\
                            --filter almost-regular
    canalgeo mesh           --generator cyclide --out-obj torus.obj
    canalgeo mesh           --generator curvature-tube --out-obj tube.obj
    canalgeo verify         --quick
    canalgeo sweep          --p 1,2 --q 2,3 --R 2,3 --r 1 --out-csv rows.csv

Reports are JSON (stdout, or --out-json) validated against the published
schema: every floating-point leaf is a {value, tol} pair carrying the
tolerance it was tested at (tol null when purely informational).  Optional
outputs: CSV tables for sweeps and batches, OBJ meshes, and PNG figure
files under --out-fig-dir.  A JSON config file (--config) supplies any of
the long flag values; explicit flags win.

Exit codes: 0 success (including degenerate-envelope fallbacks, which
warn), 1 internal error, 2 precondition or parse error, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import ast
import csv
import json
import math
import re
import sys
from importlib import resources

import numpy as np

from . import __version__, acceptance, canal, conformal, curves, generators
from .acceptance import measured as _m
from .canal import CanalPath
from .curves import PeriodicCurve
from .errors import DegenerateEnvelopeError, GeometryError, PreconditionError

TWO_PI = 2.0 * np.pi

# Curve analysis is evaluated on a grid of at least this many points
# regardless of the input sample count; see cmd_analyze_curve.
ANALYSIS_FLOOR = 1024

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PRECONDITION = 2
EXIT_VERIFY = 3


# ------------------------------------------------------------------ config


CONFIG_KEYS = ("input", "generator", "samples", "tol", "seed", "count",
               "filter", "out_json", "out_csv", "out_obj", "out_fig_dir",
               "quick", "nt", "ntheta", "p", "q", "R", "r", "lam",
               "x_type", "x_scale", "curve")

DEFAULTS = {"samples": 256, "tol": 1e-6, "seed": 0, "count": 1,
            "filter": "none", "quick": False, "nt": 96, "ntheta": 48,
            "p": "2", "q": "3", "R": "2.0", "r": "1.0", "lam": "2+sin",
            "x_type": "timelike", "x_scale": 1.0, "curve": "trefoil"}


class RunConfig:
    """Merged defaults < config file < explicit flags, then validated."""

    def __init__(self, command, values):
        self.command = command
        for key in CONFIG_KEYS:
            setattr(self, key, values.get(key))
        for key, val in DEFAULTS.items():
            if getattr(self, key) is None:
                setattr(self, key, val)
        self.validate()

    def validate(self):
        self.samples = int(self.samples)
        self.tol = float(self.tol)
        self.seed = int(self.seed)
        self.count = int(self.count)
        self.nt = int(self.nt)
        self.ntheta = int(self.ntheta)
        if self.command.startswith("analyze") or self.command == "sweep":
            if self.samples < 64 or self.samples % 2:
                raise PreconditionError(
                    f"--samples must be even and >= 64 (got {self.samples})")
        if self.tol <= 0:
            raise PreconditionError("--tol must be positive")
        if self.count < 1:
            raise PreconditionError("--count must be >= 1")
        if self.filter not in ("none", "almost-regular", "regular"):
            raise PreconditionError(f"unknown --filter {self.filter!r}")


def _merge_config(args):
    values = {}
    if args.config:
        with open(args.config) as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise PreconditionError(f"config file: {exc}") from exc
        for key, val in raw.items():
            if key not in CONFIG_KEYS:
                raise PreconditionError(f"unknown config key {key!r}")
            values[key] = val
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if getattr(args, "quick", False):
        values["quick"] = True
    return RunConfig(args.command, values)


# ----------------------------------------------------------- input parsing


def _int_list(text):
    try:
        return [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as exc:
        raise PreconditionError(f"bad integer list {text!r}") from exc


def _float_list(text):
    try:
        return [float(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as exc:
        raise PreconditionError(f"bad number list {text!r}") from exc


def load_curve_json(path, dimension):
    """Curve input format: JSON {dimension, period, samples: [[...], ...]}."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise PreconditionError(f"cannot read curve file {path}: {exc}") from exc
    try:
        dim = int(data["dimension"])
        period = float(data["period"])
        rows = np.asarray(data["samples"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(
            "curve JSON needs dimension, period, samples") from exc
    if dim != dimension:
        raise PreconditionError(
            f"expected dimension {dimension}, file says {dim}")
    if rows.ndim != 2 or rows.shape[1] != dim:
        raise PreconditionError("samples must be an (N, dimension) array")
    return PeriodicCurve(rows, period)


_PROFILE_FUNCS = {"sin": np.sin, "cos": np.cos}
_PROFILE_OPS = {ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply,
                ast.Div: np.divide, ast.Pow: np.power}


def parse_profile(expr, t):
    """Evaluate a radius profile like "2+sin" or "2 + 0.5*cos(2*t)" on grid t.

    Grammar: numbers, t, pi, + - * / **, sin, cos, parentheses.  A bare sin
    or cos means sin(t) / cos(t).
    """
    src = re.sub(r"\b(sin|cos)\b(?!\s*\()", r"\1(t)", str(expr))
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PreconditionError(f"bad profile {expr!r}: {exc}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id == "t":
                return t
            if node.id == "pi":
                return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _PROFILE_OPS:
            return _PROFILE_OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            val = ev(node.operand)
            return val if isinstance(node.op, ast.UAdd) else -val
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _PROFILE_FUNCS
                and len(node.args) == 1 and not node.keywords):
            return _PROFILE_FUNCS[node.func.id](ev(node.args[0]))
        raise PreconditionError(
            f"profile grammar: numbers, t, pi, + - * / **, sin, cos "
            f"(got {expr!r})")

    return np.broadcast_to(ev(tree), t.shape).astype(float)


CURVE_GENERATORS = ("trefoil", "torus-knot", "circle", "ellipse",
                    "spherical-loop", "random", "random-vertex-free",
                    "constant-angle")


def make_curve(cfg):
    """Resolve --input / --generator for analyze-curve."""
    if cfg.input:
        x = load_curve_json(cfg.input, dimension=3)
        if x.n != cfg.samples:
            x = x.resampled(cfg.samples)
        return x, {"input": cfg.input}
    name = cfg.generator or cfg.curve or "trefoil"
    n = cfg.samples
    p, q = _int_list(cfg.p)[0], _int_list(cfg.q)[0]
    big_r, tube_r = _float_list(cfg.R)[0], _float_list(cfg.r)[0]
    if name == "trefoil":
        return generators.trefoil(n), {"generator": name}
    if name == "torus-knot":
        return (generators.torus_knot(p, q, big_r, tube_r, n=n),
                {"generator": name, "p": p, "q": q, "R": _m(big_r),
                 "r": _m(tube_r)})
    if name == "circle":
        return generators.circle(radius=big_r, n=n), {"generator": name}
    if name == "ellipse":
        return (generators.ellipse(a=big_r, b=tube_r, n=n),
                {"generator": name})
    if name == "spherical-loop":
        return generators.spherical_loop(n=n), {"generator": name}
    if name == "random":
        return (generators.random_closed_curve(cfg.seed, n=n),
                {"generator": name, "seed": cfg.seed})
    if name == "random-vertex-free":
        return (generators.random_vertex_free_curve(cfg.seed, n=n),
                {"generator": name, "seed": cfg.seed})
    if name == "constant-angle":
        made = conformal.constant_angle_cyclide_curve(big_r, tube_r, p, q, n=n)
        if made.frame_defect is not None:
            raise PreconditionError(
                f"constant-angle curve is degenerate: {made.frame_defect}")
        return made.curve, {"generator": name, "p": p, "q": q,
                            "R": _m(big_r), "r": _m(tube_r),
                            "angle": _m(made.angle)}
    raise PreconditionError(
        f"unknown curve generator {name!r}; choose from {CURVE_GENERATORS}")


CANAL_GENERATORS = ("cyclide", "minimal-drill", "random", "torus", "pencil",
                    "curvature-tube")


def make_canal(cfg, seed=None):
    """Resolve --input / --generator for analyze-canal and mesh.

    Returns (path, source_record, singular_locus) where the locus is the
    (N, 3) polyline a curvature tube degenerates along, None otherwise.
    """
    if cfg.input:
        x = load_curve_json(cfg.input, dimension=5)
        return CanalPath(x), {"input": cfg.input}, None
    name = cfg.generator or "cyclide"
    seed = cfg.seed if seed is None else seed
    if name == "cyclide":
        scale = float(cfg.x_scale)
        e1 = np.array([1.0, 0, 0, 0, 0])
        e2 = np.array([0.0, 1, 0, 0, 0])
        e4 = np.array([0.0, 0, 0, 1, 0])
        e5 = np.array([0.0, 0, 0, 0, 1])
        if cfg.x_type == "timelike":
            x = scale * e5
        elif cfg.x_type == "spacelike":
            x = scale * e4
        elif cfg.x_type == "lightlike":
            x = scale * (e4 + e5)
        else:
            raise PreconditionError(
                "--x-type must be timelike | spacelike | lightlike")
        path = canal.dupin_cyclide_canal(x, e1, e2, n=cfg.samples)
        return path, {"generator": name, "x_type": cfg.x_type,
                      "x_scale": _m(scale)}, None
    if name == "torus":
        big_r, tube_r = _float_list(cfg.R)[0], _float_list(cfg.r)[0]
        path = canal.torus_canal(big_r, tube_r, n=cfg.samples)
        return path, {"generator": name, "R": _m(big_r), "r": _m(tube_r)}, None
    if name == "minimal-drill":
        ts = np.arange(cfg.samples) * (TWO_PI / cfg.samples)
        lam_vals = parse_profile(cfg.lam, ts)
        if np.min(lam_vals) <= 0:
            raise PreconditionError("drill profile must be positive")
        lam = PeriodicCurve(lam_vals, TWO_PI)
        u, v, w = generators.standard_drill_frame()
        path = canal.minimal_drill(lam, u, v, w)
        return path, {"generator": name, "lam": str(cfg.lam)}, None
    if name == "random":
        path = generators.random_canal_path(seed, n=cfg.samples)
        return path, {"generator": name, "seed": seed}, None
    if name == "pencil":
        path = generators.great_circle_path(n=cfg.samples)
        return path, {"generator": name}, None
    if name == "curvature-tube":
        cfg2 = RunConfig("analyze-curve", {"generator": cfg.curve,
                                           "samples": cfg.samples,
                                           "seed": cfg.seed, "p": cfg.p,
                                           "q": cfg.q, "R": cfg.R,
                                           "r": cfg.r})
        x, src = make_curve(cfg2)
        oc = conformal.osculating_canal(x)
        return oc.path, {"generator": name, "curve": src}, x.samples
    raise PreconditionError(
        f"unknown canal generator {name!r}; choose from {CANAL_GENERATORS}")


# ----------------------------------------------------------------- reports


def _wrap(obj):
    """Recursively wrap bare floats as {value, tol: null} measurements."""
    if isinstance(obj, dict):
        if set(obj) == {"value", "tol"}:
            return obj
        return {k: _wrap(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_wrap(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _m(obj)
    if isinstance(obj, np.ndarray):
        return [_wrap(v) for v in obj.tolist()]
    return obj


def load_schema():
    text = (resources.files("canalgeo") / "schemas/report.schema.json").read_text()
    return json.loads(text)


def validate_report(report):
    import jsonschema

    jsonschema.validate(report, load_schema())


def emit_report(report, cfg, summary_lines=()):
    """Validate, then write/print the JSON report; summary lines to stdout."""
    validate_report(report)
    for line in summary_lines:
        print(line)
    text = json.dumps(report, indent=2, default=str)
    if cfg.out_json:
        with open(cfg.out_json, "w") as fh:
            fh.write(text + "\n")
        print(f"report: {cfg.out_json}")
    else:
        print(text)


def write_csv(path, rows, columns):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row.get(k) is None else row[k])
                             for k in columns})


def error_block(command, exc, exit_code, extra=None):
    report = {"command": command,
              "version": __version__,
              "error": {"type": type(exc).__name__, "message": str(exc),
                        "exit_code": exit_code}}
    if extra:
        report["error"].update(_wrap(extra))
    print(json.dumps(report, indent=2, default=str))
    return exit_code


# ---------------------------------------------------------------- commands


def cmd_analyze_curve(cfg):
    x, source = make_curve(cfg)
    # Analysis runs on an internal grid of at least ANALYSIS_FLOOR points so
    # the reported scalars are functionals of the curve, not of the sampling:
    # two sample counts above the curve's bandwidth give the same interpolant
    # and therefore the same report.
    dense = x if x.n >= ANALYSIS_FLOOR else x.resampled(ANALYSIS_FLOOR)
    report = {"command": "analyze-curve", "version": __version__,
              "source": source,
              "samples": x.n, "analysis_samples": dense.n,
              "period": _m(x.period)}
    x = dense
    f = curves.frenet_apparatus(x)
    report["frenet"] = {
        "speed_min": _m(np.min(f.speed)), "speed_max": _m(np.max(f.speed)),
        "k_min": _m(np.min(f.k)), "k_max": _m(np.max(f.k)),
        "tau_min": _m(np.min(f.tau)), "tau_max": _m(np.max(f.tau)),
        "length": _m(np.mean(f.speed) * x.period)}
    vrep = curves.detect_vertices(f, tol=cfg.tol)
    report["vertex"] = {"vertex_free": vrep.vertex_free,
                        "param_count": len(vrep.params),
                        "params": [_m(t) for t in vrep.params[:32]],
                        "min_g": _m(vrep.min_g, vrep.threshold),
                        "max_g": _m(vrep.max_g)}
    if not vrep.vertex_free:
        exc = GeometryError(
            "curve has vertices; conformal invariants are undefined")
        return error_block("analyze-curve", exc, EXIT_PRECONDITION,
                           extra={"vertex": report["vertex"]})
    oc = conformal.osculating_canal(x, frenet=f)
    sph = oc.spherical_report(tol=cfg.tol)
    report["spherical_points"] = {
        "params": [_m(t) for t in sph.params],
        "contact_orders": list(sph.contact_orders),
        "min_speed_ratio": _m(sph.min_speed_ratio, cfg.tol),
        "all_spherical": sph.all_spherical}
    drill = conformal.drill_check(oc)
    report["drill_check"] = {
        "passed": drill.passed, "vacuous": drill.vacuous,
        "tested": drill.tested_count, "excluded": drill.excluded_count,
        "max_lightlike_rel": _m(drill.max_lightlike_rel, drill.tol),
        "max_direction_angle": _m(drill.max_direction_angle, drill.tol)}
    inv = conformal.conformal_invariants(x, frenet=f)
    report["conformal"] = {
        "total_conformal_length": _m(inv.total_conformal_length),
        "total_torsion_conformal": _m(inv.total_torsion_conformal),
        "total_abs_torsion": _m(inv.total_abs_torsion),
        "total_torsion": _m(inv.total_torsion)}
    cor = conformal.corollary_check(x, frenet=f)
    report["corollary"] = {
        "verdict": cor.verdict, "applicable": cor.applicable,
        "reason": cor.reason,
        "bound_margin": None if cor.bound_margin is None
        else _m(cor.bound_margin, cor.tol_bound),
        "sign_defect": None if cor.sign_defect is None
        else _m(cor.sign_defect, cor.tol_sign),
        "congruence_residual": None if cor.congruence_residual is None
        else _m(cor.congruence_residual, cor.tol_mod)}
    if cfg.out_fig_dir:
        from . import figures
        report["figures"] = figures.curve_figures(
            cfg.out_fig_dir, x, f, invariants=inv,
            spherical_params=sph.params)
    summary = [
        f"curve: {source}",
        f"vertex-free: {vrep.vertex_free}; "
        f"spherical points: {len(sph.params)}",
        f"drill check: {'pass' if drill.passed else 'FAIL'}",
        f"integral |T| dt = {inv.total_abs_torsion:.9f} "
        f"(corollary: {cor.verdict})"]
    emit_report(report, cfg, summary)
    return EXIT_OK


def _canal_case(path, tol):
    cls = canal.classify(path)
    record = {"classification": cls.verdict,
              "tangent_types": cls.tangent_types,
              "kg_types": cls.kg_types,
              "margins": _wrap(cls.margins)}
    if cls.verdict == "not_canal":
        record["length"] = None
        record["bound"] = {"verdict": "not_applicable"}
        return record, None
    length = canal.path_length(path)
    bound = canal.verify_2pi_bound(path, tol=tol)
    record["length"] = _m(length)
    record["bound"] = {"verdict": bound.verdict,
                       "margin": None if bound.margin is None
                       else _m(bound.margin, bound.tol),
                       "equality_family": bound.equality_family}
    return record, length


def cmd_analyze_canal(cfg):
    if (cfg.generator == "random") and cfg.count > 1:
        rows = []
        kept_lengths = []
        for i in range(cfg.count):
            path = generators.random_canal_path(cfg.seed + i, n=cfg.samples)
            record, length = _canal_case(path, cfg.tol)
            record["seed"] = cfg.seed + i
            verdict = record["classification"]
            keep = (cfg.filter == "none"
                    or (cfg.filter == "regular" and verdict == "regular")
                    or (cfg.filter == "almost-regular"
                        and verdict in ("regular", "drill", "almost_regular")))
            record["kept"] = keep
            rows.append(record)
            if keep and length is not None:
                kept_lengths.append(length)
        report = {"command": "analyze-canal", "version": __version__,
                  "source": {"generator": "random", "seed": cfg.seed,
                             "count": cfg.count, "filter": cfg.filter},
                  "cases": rows,
                  "kept": len(kept_lengths),
                  "min_length": None if not kept_lengths
                  else _m(min(kept_lengths), cfg.tol)}
        if cfg.out_csv:
            csv_rows = [{"seed": r["seed"],
                         "classification": r["classification"],
                         "kept": r["kept"],
                         "length": None if r["length"] is None
                         else r["length"]["value"],
                         "bound": r["bound"]["verdict"]} for r in rows]
            write_csv(cfg.out_csv, csv_rows,
                      ["seed", "classification", "kept", "length", "bound"])
            report["csv"] = cfg.out_csv
        lo = (f"min kept length = {min(kept_lengths):.9f} "
              f"(2 pi margin {min(kept_lengths) - TWO_PI:+.3e})"
              if kept_lengths else "no paths kept")
        emit_report(report, cfg, [f"{len(kept_lengths)} / {cfg.count} kept "
                                  f"({cfg.filter})", lo])
        return EXIT_OK

    path, source, _ = make_canal(cfg)
    record, length = _canal_case(path, cfg.tol)
    report = {"command": "analyze-canal", "version": __version__,
              "source": source, "samples": path.curve.n}
    report.update(record)
    summary = [f"canal: {source}",
               f"classification: {record['classification']}"]
    if length is not None:
        summary.append(f"length = {length:.9f} "
                       f"(bound: {record['bound']['verdict']})")
    if cfg.out_obj:
        m = canal.envelope_mesh(path, nt=cfg.nt, ntheta=cfg.ntheta)
        m.write_obj(cfg.out_obj)
        report["mesh"] = {"obj": cfg.out_obj,
                          "vertices": len(m.vertices),
                          "faces": len(m.faces),
                          "closed": m.is_closed(),
                          "euler_characteristic": m.euler_characteristic()}
        summary.append(f"mesh: {cfg.out_obj}")
    if cfg.out_fig_dir:
        from . import figures
        bound_rep = None
        if record["classification"] != "not_canal":
            bound_rep = canal.verify_2pi_bound(path, tol=cfg.tol)
        report["figures"] = figures.canal_figures(
            cfg.out_fig_dir, path, classification=canal.classify(path),
            bound_report=bound_rep)
    emit_report(report, cfg, summary)
    return EXIT_OK


def cmd_mesh(cfg):
    path, source, locus = make_canal(cfg)
    out_obj = cfg.out_obj or "envelope.obj"
    report = {"command": "mesh", "version": __version__, "source": source,
              "nt": cfg.nt, "ntheta": cfg.ntheta}
    try:
        m = canal.envelope_mesh(path, nt=cfg.nt, ntheta=cfg.ntheta)
    except DegenerateEnvelopeError as exc:
        # all characteristic circles coincide: fall back to the one circle.
        print(f"warning: {exc}; writing single-circle polyline", file=sys.stderr)
        from .mesh import write_obj_polyline
        write_obj_polyline(out_obj, exc.polyline)
        report["degenerate"] = True
        report["warning"] = str(exc)
        report["obj"] = out_obj
        emit_report(report, cfg, [f"degenerate envelope: polyline {out_obj}"])
        return EXIT_OK
    m.write_obj(out_obj)
    qual = m.triangle_quality()
    report.update({
        "degenerate": False, "obj": out_obj,
        "vertices": len(m.vertices), "faces": len(m.faces),
        "closed": m.is_closed(),
        "euler_characteristic": m.euler_characteristic(),
        "quality_min": _m(qual.min()), "quality_median": _m(np.median(qual))})
    summary = [f"mesh: {out_obj} ({len(m.vertices)} vertices, "
               f"{len(m.faces)} faces)"]
    if locus is not None:
        annotation = out_obj.rsplit(".", 1)[0] + ".singular.json"
        worst = np.argsort(qual)[:max(cfg.nt, 64)]
        centroids = m.vertices[m.faces[worst]].mean(axis=1)
        dense = PeriodicCurve(locus, TWO_PI).resampled(4096).samples
        d2 = np.sum((centroids[:, None, :] - dense[None, :, :]) ** 2, axis=-1)
        locus_dist = float(np.sqrt(d2.min(axis=1)).max())
        with open(annotation, "w") as fh:
            json.dump({"singular_locus": np.asarray(locus).tolist(),
                       "quality_min": float(qual.min()),
                       "worst_triangle_count": int(len(worst)),
                       "max_distance_to_locus": locus_dist}, fh, indent=2)
        report["singular_annotation"] = annotation
        report["max_worst_triangle_distance_to_locus"] = _m(locus_dist)
        summary.append(f"singular locus annotation: {annotation}")
    if cfg.out_fig_dir:
        from . import figures
        report["figures"] = figures.mesh_figure(cfg.out_fig_dir, m,
                                                singular_points=locus)
    emit_report(report, cfg, summary)
    return EXIT_OK


def cmd_verify(cfg):
    results = acceptance.run_all(quick=cfg.quick,
                                 progress=lambda r: print(r.line(), flush=True))
    all_passed = all(r.passed for r in results)
    report = {"command": "verify", "version": __version__,
              "quick": cfg.quick, "all_passed": all_passed,
              "results": [r.as_dict() for r in results]}
    validate_report(report)
    text = json.dumps(report, indent=2, default=str)
    if cfg.out_json:
        with open(cfg.out_json, "w") as fh:
            fh.write(text + "\n")
        print(f"report: {cfg.out_json}")
    else:
        print(text)
    print("verify: " + ("all criteria passed" if all_passed
                        else "FAILURES (see report)"))
    return EXIT_OK if all_passed else EXIT_VERIFY


def cmd_sweep(cfg):
    """Exploratory (p, q, R, r) table for constant-angle cyclide curves.

    Produces data only, never a verdict: rows record vertex-freeness,
    spherical-point counts and the torsion totals where they exist, for
    humans hunting between the spherical-point-free regime (where the
    corollary applies) and the rest.
    """
    ps = _int_list(cfg.p)
    qs = _int_list(cfg.q)
    rs_big = _float_list(cfg.R)
    rs_tube = _float_list(cfg.r)
    rows = []
    for p in ps:
        for q in qs:
            if math.gcd(p, q) != 1:
                continue
            for big_r in rs_big:
                for tube_r in rs_tube:
                    if not big_r > tube_r > 0:
                        continue
                    row = {"p": p, "q": q, "R": big_r, "r": tube_r}
                    try:
                        made = conformal.constant_angle_cyclide_curve(
                            big_r, tube_r, p, q, n=cfg.samples)
                        row["angle"] = made.angle
                        if made.frame_defect is not None:
                            row["defect"] = made.frame_defect
                        vrep = made.vertex_report
                        if vrep is not None:
                            row["vertex_free"] = vrep.vertex_free
                            row["vertex_margin"] = (vrep.min_g
                                                    / max(vrep.max_g, 1e-300))
                        if made.spherical_params is not None:
                            row["spherical_count"] = len(made.spherical_params)
                            row["min_speed_ratio"] = made.min_speed_ratio
                            inv = conformal.conformal_invariants(made.curve)
                            row["total_abs_torsion"] = inv.total_abs_torsion
                            row["margin_over_2pi"] = (inv.total_abs_torsion
                                                      - TWO_PI)
                    except GeometryError as exc:
                        row["defect"] = str(exc)
                    rows.append(row)
    columns = ["p", "q", "R", "r", "angle", "vertex_free", "vertex_margin",
               "spherical_count", "min_speed_ratio", "total_abs_torsion",
               "margin_over_2pi", "defect"]
    if cfg.out_csv:
        write_csv(cfg.out_csv, rows, columns)
    report = {"command": "sweep", "version": __version__,
              "samples": cfg.samples, "rows": _wrap(rows)}
    if cfg.out_csv:
        report["csv"] = cfg.out_csv
    if cfg.out_fig_dir:
        from . import figures
        report["figures"] = figures.sweep_figure(cfg.out_fig_dir, rows)
    clean = [r for r in rows if r.get("vertex_free")
             and r.get("spherical_count") == 0]
    summary = [f"{len(rows)} parameter sets "
               f"({len(clean)} vertex-free and spherical-point-free)"]
    if clean:
        best = min(clean, key=lambda r: r["total_abs_torsion"])
        summary.append(
            f"smallest integral |T| dt among clean rows: "
            f"{best['total_abs_torsion']:.6f} at "
            f"(p={best['p']}, q={best['q']}, R={best['R']}, r={best['r']})")
    emit_report(report, cfg, summary)
    return EXIT_OK


COMMANDS = {"analyze-curve": cmd_analyze_curve,
            "analyze-canal": cmd_analyze_canal,
            "mesh": cmd_mesh,
            "verify": cmd_verify,
            "sweep": cmd_sweep}


# ------------------------------------------------------------------- main


def build_parser():
    parser = argparse.ArgumentParser(
        prog="canalgeo",
        description="Sphere-space geometry of canal surfaces: analysis, "
                    "verification, meshes.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file; flags override")
        sp.add_argument("--input", help="curve/path JSON file "
                        "{dimension, period, samples}")
        sp.add_argument("--generator", help="built-in input family")
        sp.add_argument("--samples", type=int, help="sample count N "
                        "(even, >= 64)")
        sp.add_argument("--tol", type=float, help="report tolerance")
        sp.add_argument("--seed", type=int, help="seed for random families")
        sp.add_argument("--count", type=int, help="batch size for random "
                        "families")
        sp.add_argument("--filter", choices=["none", "almost-regular",
                                             "regular"],
                        help="batch filter on the classification")
        sp.add_argument("--out-json", dest="out_json", help="report file")
        sp.add_argument("--out-csv", dest="out_csv", help="CSV table file")
        sp.add_argument("--out-obj", dest="out_obj", help="OBJ mesh file")
        sp.add_argument("--out-fig-dir", dest="out_fig_dir",
                        help="directory for PNG figure files")
        sp.add_argument("--quick", action="store_true", default=None,
                        help="reduced sample counts, same verdicts")
        sp.add_argument("--nt", type=int, help="mesh samples along the path")
        sp.add_argument("--ntheta", type=int,
                        help="mesh samples around the circles")
        sp.add_argument("--p", help="winding number(s), comma list for sweep")
        sp.add_argument("--q", help="winding number(s), comma list for sweep")
        sp.add_argument("--R", help="big radius / radii")
        sp.add_argument("--r", help="tube radius / radii")
        sp.add_argument("--lam", help='drill radius profile, e.g. "2+sin"')
        sp.add_argument("--x-type", dest="x_type",
                        choices=["timelike", "spacelike", "lightlike"],
                        help="cyclide centre type")
        sp.add_argument("--x-scale", dest="x_scale", type=float,
                        help="cyclide centre scale")
        sp.add_argument("--curve",
                        help="curve family (analyze-curve) or the spine "
                             "family of a curvature-tube canal")

    for name in COMMANDS:
        common(sub.add_parser(name))
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        return COMMANDS[args.command](cfg)
    except PreconditionError as exc:
        return error_block(args.command, exc, EXIT_PRECONDITION)
    except GeometryError as exc:
        return error_block(args.command, exc, EXIT_PRECONDITION)
    except Exception as exc:  # noqa: BLE001 - the CLI boundary
        return error_block(args.command, exc, EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
