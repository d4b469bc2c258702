"""Exception types raised by the geometry layers.

Everything derives from GeometryError so callers (and the CLI) can map the
whole family to one exit path; the concrete class says which precondition
failed.
"""


class GeometryError(Exception):
    """Base class for all geometric failures."""


class PreconditionError(GeometryError):
    """An operation's stated precondition does not hold for the input."""


class DegenerateSpanError(PreconditionError):
    """Orthogonalization hit a dependent or light-like direction."""


class RankDeficiencyError(PreconditionError):
    """Input vectors do not have full rank."""


class NonSpacelikeSpanError(PreconditionError):
    """A plane that must be space-like (signature ++) is not."""


class NonSpacelikeTangentError(PreconditionError):
    """A path tangent that must be space-like is not."""


class IrregularCurveError(PreconditionError):
    """A curve parametrization is singular (speed vanishes somewhere)."""


class InflectionError(PreconditionError):
    """Curvature vanishes somewhere; the Frenet frame is undefined."""


class VertexError(PreconditionError):
    """k'^2 + k^2 tau^2 vanishes somewhere; vertex-free machinery refuses."""


class TorsionZeroError(PreconditionError):
    """tau = 0 at a sample where a formula divides by it."""


class OrientationIncoherenceError(GeometryError):
    """Continuity around a closed path forces an orientation flip."""


class DegenerateEnvelopeError(GeometryError):
    """All characteristic circles coincide; the envelope is a circle.

    Carries the circle polyline so callers can fall back to it.
    """

    def __init__(self, message, polyline=None):
        super().__init__(message)
        self.polyline = polyline


class EmptyIntersectionError(PreconditionError):
    """A pencil has no real intersection circle."""


class TooFewSamplesError(PreconditionError):
    """Sample count below the minimum for a trigonometric interpolant."""
