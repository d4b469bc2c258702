"""Triangle meshes and Wavefront OBJ output.

Minimal container used by the envelope mesher: vertex rows, triangle index
rows, plus the audits the tests lean on (Euler characteristic, closedness,
triangle quality).  OBJ indices are 1-based per the format.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class TriMesh:
    """vertices: (V, 3) float rows; faces: (F, 3) int rows into vertices."""

    vertices: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=int).reshape(-1, 3)
        if self.faces.size and (self.faces.min() < 0
                                or self.faces.max() >= len(self.vertices)):
            raise ValueError("face indices out of range")

    def edge_counts(self):
        """Map from undirected edge to the number of incident triangles."""
        counts = {}
        for a, b, c in self.faces:
            for e in ((a, b), (b, c), (c, a)):
                key = (min(e), max(e))
                counts[key] = counts.get(key, 0) + 1
        return counts

    def euler_characteristic(self):
        used = np.unique(self.faces)
        return int(len(used) - len(self.edge_counts()) + len(self.faces))

    def is_closed(self):
        """True when every edge bounds exactly two triangles."""
        counts = self.edge_counts()
        return bool(counts) and all(v == 2 for v in counts.values())

    def triangle_areas(self):
        p = self.vertices[self.faces]
        return 0.5 * np.linalg.norm(
            np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=-1)

    def triangle_quality(self):
        """Per-triangle ratio 4*sqrt(3)*area / (sum of squared edges).

        1 for equilateral, -> 0 for degenerate slivers.
        """
        p = self.vertices[self.faces]
        e2 = (np.sum((p[:, 1] - p[:, 0]) ** 2, axis=-1)
              + np.sum((p[:, 2] - p[:, 1]) ** 2, axis=-1)
              + np.sum((p[:, 0] - p[:, 2]) ** 2, axis=-1))
        with np.errstate(invalid="ignore", divide="ignore"):
            return 4.0 * np.sqrt(3.0) * self.triangle_areas() / e2

    def drop_degenerate(self, area_tol=1e-12):
        """Remove triangles of area <= area_tol (absolute)."""
        keep = self.triangle_areas() > area_tol
        return TriMesh(self.vertices, self.faces[keep])

    def write_obj(self, path):
        """ASCII OBJ: v records then 1-based f records."""
        lines = [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in self.vertices]
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in self.faces]
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        return path


def write_obj_polyline(path, points, closed=True):
    """ASCII OBJ polyline fallback (v records plus one l record)."""
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    lines = [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in points]
    idx = list(range(1, len(points) + 1))
    if closed and points.shape[0] > 1:
        idx.append(1)
    lines.append("l " + " ".join(str(i) for i in idx))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
