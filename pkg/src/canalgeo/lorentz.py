"""Linear algebra for the Lorentz form of signature (4, 1) on R^5.

The bilinear form is

    <x, y> = x1 y1 + x2 y2 + x3 y3 + x4 y4 - x5 y5,

so the metric matrix is G = diag(1, 1, 1, 1, -1).  Vectors are plain numpy
arrays of shape (5,), batches are arrays of shape (..., 5).  The module
provides the form itself, causal classification with a relative tolerance,
Lorentz Gram-Schmidt, orthogonal complements, a four-fold wedge (the vector
Lorentz-dual to the span of four vectors) and seeded random form-preserving
transforms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpanError, RankDeficiencyError

METRIC_DIAG = np.array([1.0, 1.0, 1.0, 1.0, -1.0])
METRIC = np.diag(METRIC_DIAG)

# Future-pointing reference direction (the time axis).
E5 = np.array([0.0, 0.0, 0.0, 0.0, 1.0])


class CausalType(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    ZERO = "zero"


def inner(x, y):
    """Lorentz inner product <x, y>; broadcasts over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.sum(x * y * METRIC_DIAG, axis=-1)


def sq(x):
    """Lorentz square <x, x>."""
    return inner(x, x)


def spacelike_norm(x):
    """sqrt(<x, x>) for space-like input; raises on negative square."""
    q = sq(x)
    if np.any(q < 0):
        raise ValueError("spacelike_norm of a non-space-like vector")
    return np.sqrt(q)


def causal_type(x, tol=1e-8):
    """Classify one vector against the light cone.

    The comparison scale is the squared sup-norm, so the verdict is invariant
    under x -> lambda x: zero if ||x||_inf <= tol, light-like if
    |<x, x>| <= tol * ||x||_inf^2, otherwise space- or time-like by sign.
    """
    x = np.asarray(x, dtype=float)
    a = np.max(np.abs(x))
    if a <= tol:
        return CausalType.ZERO
    q = sq(x)
    if abs(q) <= tol * a * a:
        return CausalType.LIGHTLIKE
    return CausalType.SPACELIKE if q > 0 else CausalType.TIMELIKE


def causal_types(xs, tol=1e-8):
    """Classify a batch of shape (n, 5); returns a list of CausalType."""
    xs = np.asarray(xs, dtype=float)
    return [causal_type(row, tol) for row in xs]


def wedge4(a, b, c, d):
    """Vector nu Lorentz-dual to span(a, b, c, d).

    Defined by <nu, w> = det(a, b, c, d, w) for all w, where the determinant
    stacks the five vectors as rows.  Computed by cofactor expansion along
    the last row.  nu = 0 exactly when the four vectors are dependent, and
    nu is Lorentz-orthogonal to each of them.  Broadcasts: inputs of shape
    (..., 5) give output of shape (..., 5).
    """
    rows = np.stack(np.broadcast_arrays(
        np.asarray(a, float), np.asarray(b, float),
        np.asarray(c, float), np.asarray(d, float)), axis=-2)
    cols = np.arange(5)
    out = np.empty(rows.shape[:-2] + (5,))
    for j in range(5):
        minor = rows[..., :, cols != j]
        out[..., j] = (-1.0) ** j * np.linalg.det(minor)
    # <nu, w> = sum_j cof_j w_j requires nu = G cof.
    return out * METRIC_DIAG


def gram_schmidt_lorentz(vectors, tol=1e-10):
    """Lorentz Gram-Schmidt on an ordered list of vectors.

    Returns (basis, signature): basis rows are Lorentz-orthonormal
    (<e_i, e_j> = +-delta_ij) spanning the same flag, signature is the tuple
    of +-1 squares in order.  Raises DegenerateSpanError when a step is
    dependent on its predecessors or produces a light-like direction
    (|<w, w>| <= tol * ||w||_inf^2).
    """
    basis = []
    signs = []
    for v in vectors:
        w = np.array(v, dtype=float)
        scale = np.max(np.abs(w))
        if scale == 0.0:
            raise DegenerateSpanError("zero vector in Gram-Schmidt input")
        for e, s in zip(basis, signs):
            w = w - s * inner(w, e) * e
        a = np.max(np.abs(w))
        if a <= 1e-12 * scale:
            raise DegenerateSpanError("dependent vector in Gram-Schmidt input")
        q = sq(w)
        if abs(q) <= tol * a * a:
            raise DegenerateSpanError("light-like direction in Gram-Schmidt flag")
        basis.append(w / np.sqrt(abs(q)))
        signs.append(1 if q > 0 else -1)
    return np.array(basis), tuple(signs)


def orthogonal_complement(vectors, tol=1e-10):
    """Basis (rows) of the Lorentz-orthogonal complement of span(vectors).

    Requires the input list to have full rank; raises RankDeficiencyError
    otherwise.  The returned rows are an orthonormal (euclidean) basis of the
    null space of the pairing matrix, which equals the Lorentz complement.
    """
    arr = np.atleast_2d(np.asarray(vectors, dtype=float))
    k = arr.shape[0]
    if np.linalg.matrix_rank(arr, tol=tol * max(1.0, np.max(np.abs(arr)))) < k:
        raise RankDeficiencyError("input vectors are rank-deficient")
    # <w, v> = w . (G v): the complement is the kernel of rows G v_i.
    pair = arr * METRIC_DIAG
    _, s, vt = np.linalg.svd(pair)
    return vt[k:]


@dataclass(frozen=True)
class LorentzTransform:
    """A matrix M with M^T G M = G, acting on row vectors as x -> M x.

    Orthochronous (future-preserving) iff M[4, 4] > 0; the random generator
    only produces orthochronous transforms.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        err = np.max(np.abs(m.T @ METRIC @ m - METRIC))
        if err > 1e-9:
            raise ValueError(f"matrix does not preserve the form (residual {err:.2e})")

    def apply(self, x):
        """Apply to a vector (5,) or batch (..., 5)."""
        return np.asarray(x, dtype=float) @ self.matrix.T

    def inverse(self):
        """Closed-form inverse G M^T G (no linear solve)."""
        return LorentzTransform(METRIC @ self.matrix.T @ METRIC)

    def compose(self, other):
        """self after other."""
        return LorentzTransform(self.matrix @ other.matrix)

    @property
    def preserves_future(self):
        return self.matrix[4, 4] > 0


def random_lorentz_transform(seed):
    """Seeded random orthochronous Lorentz transform.

    Draws a standard normal 5x5 matrix, Lorentz-orthogonalizes its columns,
    moves the (unique, almost surely) time-like column last and flips it
    future-pointing.  Deterministic given the seed.
    """
    rng = np.random.default_rng(seed)
    for _ in range(64):
        raw = rng.standard_normal((5, 5))
        try:
            basis, signature = gram_schmidt_lorentz(list(raw.T), tol=1e-8)
        except DegenerateSpanError:
            continue
        if signature.count(-1) != 1:
            continue
        t = signature.index(-1)
        order = [i for i in range(5) if i != t] + [t]
        cols = basis[order]
        if cols[-1][4] < 0:
            cols[-1] = -cols[-1]
        m = cols.T
        if np.max(np.abs(m.T @ METRIC @ m - METRIC)) <= 1e-10:
            return LorentzTransform(m)
    raise RuntimeError("could not draw a well-conditioned Lorentz transform")
