# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# Geometry of the complex oblique manifold {W : ddiag(W^H W) = I_L}, i.e., the
# Cartesian product of L unit spheres in C^{M+1}. Points and tangent vectors
# are plain (M+1) x L complex ndarrays; tangent vectors carry no reference to
# their base point.
#
# license: GPLv2
#

# Standard library imports
# (none yet)

# Third party imports (anything installed into the local Python environment)
import numpy as np

# Local application imports (anything from oblique-beam)
# (none yet)

ZERO_COLUMN_THRESHOLD = 1e-300
MANIFOLD_TOL = 1e-12
TANGENCY_TOL = 1e-10


class ZeroColumnError(Exception):
    """
    Exception to be raised when a retraction step cancels a column of the base
    point, i.e., ||w_l + u_l|| vanishes. The caller must shrink the step.
    """
    pass


def _check_shapes(*arrays):
    shape = arrays[0].shape
    for arr in arrays[1:]:
        if arr.shape != shape:
            raise ValueError(f"shape mismatch: {shape} vs {arr.shape}")


def _re_diag(W, Z):
    # diagonal of Re(W^H Z) without forming the full L x L product
    return np.real(np.sum(W.conj() * Z, axis=0))


def inner(W, U, V):
    """
    Riemannian metric <U, V>_W = Re Tr(U^H V)

    Args:
        W (ndarray): base point (only used for the shape check)
        U (ndarray): tangent vector at W
        V (ndarray): tangent vector at W

    Returns:
        (float): the inner product

    Raises:
        ValueError: on shape mismatch
    """
    _check_shapes(W, U, V)
    return float(np.real(np.vdot(U, V)))


def norm(U):
    """Frobenius norm of a tangent vector"""
    return float(np.linalg.norm(U))


def project_tangent(W, Z):
    """
    Orthogonal projection onto the tangent space at W,
    U = Z - W ddiag(Re(W^H Z)).

    Args:
        W (ndarray): point on the manifold
        Z (ndarray): ambient matrix of the same shape

    Returns:
        (ndarray): tangent vector at W
    """
    _check_shapes(W, Z)
    return Z - W * _re_diag(W, Z)[None, :]


def transport(W_plus, U):
    """
    Vector transport of U (tangent at some previous point) into the tangent
    space at W_plus. It coincides with the projection onto T_{W_plus}.
    """
    return project_tangent(W_plus, U)


def retract(W, U):
    """
    Metric-projection retraction, column-wise (w_l + u_l) / ||w_l + u_l||.

    Args:
        W (ndarray): point on the manifold
        U (ndarray): tangent vector at W

    Returns:
        (ndarray): point on the manifold, W itself (as a copy) when U == 0

    Raises:
        ZeroColumnError: if a column of W + U has norm below 1e-300
    """
    _check_shapes(W, U)
    if not np.any(U):
        return W.copy()
    V = W + U
    col_norms = np.linalg.norm(V, axis=0)
    if np.any(col_norms < ZERO_COLUMN_THRESHOLD):
        bad = [int(col) for col in np.flatnonzero(col_norms < ZERO_COLUMN_THRESHOLD)]
        raise ZeroColumnError(f"retraction step cancels column(s) {bad}")
    return V / col_norms[None, :]


def random_point(M, L, seed):
    """
    Draw a random point: each column a standard complex Gaussian vector in
    C^{M+1} (real and imaginary parts N(0, 1/2)) scaled to unit norm.

    Args:
        M (int): number of antennas (the point has M+1 rows)
        L (int): number of columns
        seed (int, SeedSequence or Generator): seed of the random stream

    Returns:
        (ndarray): point of shape (M+1, L)
    """
    if M < 1 or L < 1:
        raise ValueError(f"M and L must be >= 1, got {M} and {L}")
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((M + 1, L)) + 1j * rng.standard_normal((M + 1, L))) / np.sqrt(2.0)
    return Z / np.linalg.norm(Z, axis=0)[None, :]


def manifold_residual(W):
    """Largest deviation max_l | ||w_l|| - 1 |"""
    return float(np.max(np.abs(np.linalg.norm(W, axis=0) - 1.0)))


def is_on_manifold(W, tol=MANIFOLD_TOL):
    return manifold_residual(W) <= tol


def tangency_residual(W, U):
    """Largest |Re(w_l^H u_l)|; zero for tangent vectors"""
    return float(np.max(np.abs(_re_diag(W, U))))


def is_tangent(W, U, tol=TANGENCY_TOL):
    return tangency_residual(W, U) <= tol
