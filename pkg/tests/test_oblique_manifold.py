# Tests for the oblique manifold geometry of oblique-beam
#
# license: GPLv2
#

# Standard library imports
# (none yet)

# Third party imports (anything installed into the local Python environment)
import numpy as np
import pytest

# Local application imports (anything from oblique-beam)
from beamforming.oblique_manifold import (ZeroColumnError, inner, is_on_manifold, is_tangent,
                                          manifold_residual, norm, project_tangent, random_point,
                                          retract, tangency_residual, transport)


def random_ambient(shape, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_random_point():
    W = random_point(4, 3, seed=11)
    assert W.shape == (5, 3)
    assert W.dtype == complex
    assert is_on_manifold(W)
    assert np.array_equal(W, random_point(4, 3, seed=11))
    assert not np.array_equal(W, random_point(4, 3, seed=12))

    with pytest.raises(ValueError):
        random_point(0, 3, seed=0)


def test_projection_is_tangent_and_idempotent():
    W = random_point(3, 2, seed=1)
    Z = random_ambient(W.shape, seed=2)

    U = project_tangent(W, Z)

    assert is_tangent(W, U)
    assert tangency_residual(W, U) < 1e-12
    assert np.allclose(project_tangent(W, U), U, atol=1e-14)
    # the removed part is orthogonal to every tangent vector
    V = project_tangent(W, random_ambient(W.shape, seed=3))
    assert inner(W, Z - U, V) == pytest.approx(0.0, abs=1e-12)


def test_inner_and_norm():
    W = random_point(2, 2, seed=4)
    U = project_tangent(W, random_ambient(W.shape, seed=5))
    V = project_tangent(W, random_ambient(W.shape, seed=6))

    assert inner(W, U, V) == pytest.approx(inner(W, V, U))
    assert inner(W, U, U) == pytest.approx(norm(U) ** 2)
    assert inner(W, U, 1j * U) == pytest.approx(0.0, abs=1e-12)

    with pytest.raises(ValueError):
        inner(W, U, V[:, :1])


def test_retraction():
    W = random_point(3, 4, seed=7)
    U = project_tangent(W, random_ambient(W.shape, seed=8))

    Wp = retract(W, 0.3 * U)
    assert manifold_residual(Wp) < 1e-12

    # R_W(0) = W exactly, as a new array
    W0 = retract(W, np.zeros_like(W))
    assert np.array_equal(W0, W)
    assert W0 is not W

    # first order agreement with the straight line
    step = 1e-6
    assert np.linalg.norm(retract(W, step * U) - (W + step * U)) < 1e-10


def test_retraction_second_order():
    W = random_point(3, 4, seed=21)
    U = project_tangent(W, random_ambient(W.shape, seed=22))

    errors = [np.linalg.norm(retract(W, alpha * U) - (W + alpha * U)) for alpha in (1e-2, 1e-3, 1e-4)]

    # O(alpha^2): every tenfold smaller step shrinks the error a hundredfold
    for coarse, fine in zip(errors, errors[1:]):
        assert fine / coarse == pytest.approx(1e-2, rel=0.2)


def test_retraction_zero_column():
    W = np.zeros((2, 2), dtype=complex)
    W[0, 0] = 1.0
    W[1, 1] = 1.0
    U = np.zeros_like(W)
    U[0, 0] = -1.0
    with pytest.raises(ZeroColumnError):
        retract(W, U)


def test_transport():
    W = random_point(3, 2, seed=9)
    U = project_tangent(W, random_ambient(W.shape, seed=10))
    Wp = retract(W, 0.5 * U)

    V = transport(Wp, U)
    assert is_tangent(Wp, V)
    assert np.array_equal(V, project_tangent(Wp, U))
