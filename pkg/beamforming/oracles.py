# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# Reference results that do not use the solver machinery: the closed-form
# single-user optimum and an exhaustive grid search over tiny instances.
#
# license: GPLv2
#

# Standard library imports
from collections import namedtuple
import sys

# Third party imports (anything installed into the local Python environment)
import numpy as np

# Local application imports (anything from oblique-beam)
from tools.logging import log

MIN_RESOLUTION = 8
MAX_GRID_POINTS = 10 ** 8
MAX_GRID_PARAMS = 5
CHUNK_SIZE = 50000

GridSpec = namedtuple('GridSpec', ('resolution', 'n_params'))
GridResult = namedtuple('GridResult', ('t', 'point', 'n_points'))


class OracleError(Exception):
    """
    Exception to be raised when an oracle is applied outside its domain
    """
    pass


class GridTooLargeError(OracleError):
    """
    Exception to be raised when a grid search would exceed the parameter or
    point budget
    """
    pass


def single_user_optimum(inst):
    """
    Matched-filter optimum of a single-cell single-user instance,
    t* = P ||h~||^2 / (Gamma sigma^2).

    Args:
        inst (NetworkInstance): instance with L = K = 1

    Returns:
        (float): optimal weighted SINR

    Raises:
        OracleError: if L > 1 or K > 1
    """
    if inst.L != 1 or inst.K != 1:
        raise OracleError(f"closed form needs L = K = 1, got L={inst.L}, K={inst.K}")
    h = inst.channels[0, 0, 0]
    return float(inst.budgets[0] * np.vdot(h, h).real / (inst.targets[0] * inst.noise_power[0, 0]))


def params_per_column(M):
    """
    Real parameters describing one column up to its irrelevant phases: 2M - 2
    for a direction in C^M modulo a global phase plus one slack share.
    """
    return 2 * M - 1


def grid_spec(prob, resolution):
    """
    Build the GridSpec of a normalized problem

    Raises:
        GridTooLargeError: if the grid exceeds MAX_GRID_PARAMS parameters or
            MAX_GRID_POINTS points
        OracleError: if resolution < MIN_RESOLUTION
    """
    if resolution < MIN_RESOLUTION:
        raise OracleError(f"grid resolution must be >= {MIN_RESOLUTION}, got {resolution}")
    n_params = prob.L * params_per_column(prob.M)
    if n_params > MAX_GRID_PARAMS:
        raise GridTooLargeError(f"{n_params} grid parameters exceed the limit of {MAX_GRID_PARAMS}")
    if resolution ** n_params > MAX_GRID_POINTS:
        raise GridTooLargeError(f"{resolution}^{n_params} grid points exceed the limit of {MAX_GRID_POINTS}")
    return GridSpec(resolution, n_params)


def _columns_from_params(params, M):
    """
    Map a batch of parameter vectors (B, 2M-1) to unit columns (B, M+1):
    hyperspherical magnitudes (M-1 angles in [0, pi/2]), relative phases of
    entries 2..M (M-1 angles in [0, 2 pi)) and the slack share phi, i.e.,
    w = [cos(phi) u; sin(phi)].
    """
    batch = params.shape[0]
    angles = params[:, :M - 1]
    phases = params[:, M - 1:2 * M - 2]
    phi = params[:, -1]

    magnitudes = np.ones((batch, M))
    for i in range(M - 1):
        magnitudes[:, i] *= np.cos(angles[:, i])
        magnitudes[:, i + 1:] *= np.sin(angles[:, i])[:, None]
    u = magnitudes.astype(complex)
    u[:, 1:] *= np.exp(1j * phases)

    columns = np.empty((batch, M + 1), dtype=complex)
    columns[:, :M] = np.cos(phi)[:, None] * u
    columns[:, M] = np.sin(phi)
    return columns


def _axes(resolution, M, L):
    quarter = np.linspace(0.0, np.pi / 2.0, resolution)
    turn = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    per_column = [quarter] * (M - 1) + [turn] * (M - 1) + [quarter]
    return per_column * L


def _batch_sinr_min(prob, Ws):
    # Ws has shape (B, M+1, L); plain evaluation of the min weighted SINR
    gains = np.abs(np.einsum('jlkm,bmj->bjlk', prob.channels.conj(), Ws)) ** 2
    idx = np.arange(prob.L)
    signal = gains[:, idx, idx]
    interference = gains.sum(axis=1) - signal
    table = signal / prob.targets[None, :, None] / (np.maximum(interference, 0.0) + 1.0)
    return table.reshape(table.shape[0], -1).min(axis=1)


def grid_search(prob, spec):
    """
    Best min weighted SINR over a regular grid of beam matrices. The result is
    a feasible-point maximum and hence a lower bound on the optimum.

    Args:
        prob (NormalizedProblem): tiny normalized problem
        spec (GridSpec): grid settings, see grid_spec()

    Returns:
        (GridResult): best SINR, the beam matrix attaining it (first in grid
            order on ties) and the number of grid points evaluated

    Raises:
        GridTooLargeError: if the grid exceeds its budget
        OracleError: if spec.n_params does not match the problem dimensions
    """
    fn = sys._getframe().f_code.co_name

    expected = grid_spec(prob, spec.resolution)
    if spec.n_params != expected.n_params:
        raise OracleError(f"grid for L={prob.L}, M={prob.M} has {expected.n_params} parameters, "
                          f"got n_params={spec.n_params}")
    spec = expected
    M, L = prob.M, prob.L
    axes = _axes(spec.resolution, M, L)
    shape = tuple(len(axis) for axis in axes)
    n_points = int(np.prod(shape))
    n_col = params_per_column(M)

    best_t, best_point = -np.inf, None
    # chunks are independent; merging by strict '>' keeps the first maximum
    for start in range(0, n_points, CHUNK_SIZE):
        flat = np.arange(start, min(start + CHUNK_SIZE, n_points))
        indices = np.unravel_index(flat, shape)
        params = np.stack([axis[index] for axis, index in zip(axes, indices)], axis=1)
        Ws = np.stack([_columns_from_params(params[:, l * n_col:(l + 1) * n_col], M)
                       for l in range(L)], axis=2)
        values = _batch_sinr_min(prob, Ws)
        i = int(np.argmax(values))
        if values[i] > best_t:
            best_t, best_point = float(values[i]), Ws[i]

    log(f"{fn}(): best min SINR {best_t!r} over {n_points} grid points")
    return GridResult(best_t, best_point, n_points)
