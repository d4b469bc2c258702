"""Signature-(4,1) linear algebra: inner products, causal classes, wedges."""

import numpy as np
import pytest

from canalgeo.errors import DegenerateSpanError, RankDeficiencyError
from canalgeo.lorentz import (
    CausalType,
    causal_type,
    gram_schmidt_lorentz,
    inner,
    orthogonal_complement,
    random_lorentz_transform,
    sq,
    wedge4,
)

E = np.eye(5)
G = np.diag([1.0, 1.0, 1.0, 1.0, -1.0])


def test_inner_basis_values():
    assert inner(E[4], E[4]) == -1.0
    assert inner(np.array([1.0, 2, 0, 0, 0]), 7.0 * E[4]) == 0.0
    light = np.array([0.0, 0, 0, 1, 1])
    assert inner(light, light) == 0.0


def test_inner_bilinear_symmetric():
    rng = np.random.default_rng(3)
    for _ in range(50):
        x, y, z = rng.standard_normal((3, 5))
        a, b = rng.standard_normal(2)
        scale = max(abs(inner(x, y)), 1.0)
        assert abs(inner(x, y) - inner(y, x)) < 1e-12 * scale
        lin = inner(a * x + b * y, z) - a * inner(x, z) - b * inner(y, z)
        assert abs(lin) < 1e-12 * max(abs(inner(x, z)), abs(inner(y, z)), 1.0)


def test_causal_type_examples():
    assert causal_type(E[0], tol=1e-9) is CausalType.SPACELIKE
    assert causal_type(np.array([0.0, 0, 0, 1, 1]), tol=1e-9) is CausalType.LIGHTLIKE
    assert causal_type(np.array([0.0, 0, 0, 0.5, 1]), tol=1e-9) is CausalType.TIMELIKE
    assert causal_type(np.zeros(5), tol=1e-9) is CausalType.ZERO


def test_causal_type_scale_free():
    """Relative tolerance must classify scaled copies identically."""
    x = np.array([0.3, -0.1, 0.9, 0.2, 0.4])
    for s in (1e-6, 1.0, 1e6):
        assert causal_type(s * x) is causal_type(x)


def test_wedge4_basis_and_dependence():
    nu = wedge4(E[0], E[1], E[2], E[3])
    np.testing.assert_allclose(nu, -E[4], atol=1e-14)
    np.testing.assert_allclose(wedge4(E[0], E[1], E[2], E[0]), np.zeros(5),
                               atol=1e-14)


def test_wedge4_defining_identity():
    """<wedge4(a,b,c,d), w> = det(a,b,c,d,w) for all w, so nu is orthogonal
    to each argument and matches the cofactor determinant oracle."""
    rng = np.random.default_rng(11)
    for _ in range(100):
        quad = rng.standard_normal((4, 5))
        nu = wedge4(*quad)
        scale = max(np.max(np.abs(nu)), 1.0)
        for v in quad:
            assert abs(inner(nu, v)) < 1e-10 * scale * np.max(np.abs(v))
        w = rng.standard_normal(5)
        det = np.linalg.det(np.vstack([quad, w]))
        assert abs(inner(nu, w) - det) < 1e-10 * max(abs(det), scale)


def test_gram_schmidt_examples():
    basis, signature = gram_schmidt_lorentz([E[0], E[0] + E[1]])
    np.testing.assert_allclose(basis, [E[0], E[1]], atol=1e-12)
    assert signature == (1, 1)

    basis, signature = gram_schmidt_lorentz([E[3], E[4]])
    np.testing.assert_allclose(np.abs(basis), [E[3], E[4]], atol=1e-12)
    assert signature == (1, -1)

    with pytest.raises(DegenerateSpanError):
        gram_schmidt_lorentz([E[3] + E[4]])


def test_orthogonal_complement():
    comp = orthogonal_complement([E[4]])
    assert comp.shape == (4, 5)
    assert np.max(np.abs(comp[:, 4])) < 1e-12

    comp = orthogonal_complement([E[0], E[1]])
    assert comp.shape == (3, 5)
    for row in comp:
        assert abs(inner(row, E[0])) < 1e-10
        assert abs(inner(row, E[1])) < 1e-10

    rng = np.random.default_rng(5)
    pair = rng.standard_normal((2, 5))
    comp = orthogonal_complement(list(pair))
    for row in comp:
        for v in pair:
            assert abs(inner(row, v)) < 1e-10 * np.max(np.abs(v))

    with pytest.raises(RankDeficiencyError):
        orthogonal_complement([E[0], E[0]])


def test_random_transform_is_lorentz():
    m0 = random_lorentz_transform(0).matrix
    np.testing.assert_array_equal(m0, random_lorentz_transform(0).matrix)
    for seed in range(8):
        tr = random_lorentz_transform(seed)
        residual = tr.matrix.T @ G @ tr.matrix - G
        assert np.max(np.abs(residual)) < 1e-10
        assert tr.preserves_future
        light = np.array([0.0, 0, 0, 1, 1])
        image = tr.apply(light)
        assert causal_type(image, tol=1e-9) is CausalType.LIGHTLIKE
        round_trip = tr.compose(tr.inverse()).matrix
        assert np.max(np.abs(round_trip - np.eye(5))) < 1e-9


def test_transform_preserves_inner_and_causal_type():
    rng = np.random.default_rng(17)
    for seed in range(6):
        tr = random_lorentz_transform(100 + seed)
        x, y = rng.standard_normal((2, 5))
        lhs = inner(tr.apply(x), tr.apply(y))
        assert abs(lhs - inner(x, y)) < 1e-9 * max(abs(inner(x, y)), 1.0)
        if abs(sq(x)) > 10 * 1e-8 * np.max(np.abs(x)) ** 2:
            assert causal_type(tr.apply(x)) is causal_type(x)
