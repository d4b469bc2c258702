"""Sphere-space geometry of canal surfaces.

Closed curves and sphere families through the Lorentz R^5 model: the
quadric of oriented 2-spheres, canal paths and their envelopes, geodesic
curvature classification with the 2 pi length bound, osculating-sphere
canals, and the conformal invariants (arc length, torsion, omega) of closed
space curves.
"""

__version__ = "0.1.0"

from . import canal, conformal, curves, generators, lorentz, mesh, spheres
from .errors import GeometryError

__all__ = [
    "GeometryError",
    "canal",
    "conformal",
    "curves",
    "generators",
    "lorentz",
    "mesh",
    "spheres",
    "__version__",
]
