# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# Riemannian conjugate gradient ascent of F(., t, mu) on the oblique manifold
# with modified Hestenes-Stiefel directions and an Armijo backtracking line
# search.
#
# license: GPLv2
#

# Standard library imports
from collections import namedtuple
import sys

# Third party imports (anything installed into the local Python environment)
import numpy as np

# Local application imports (anything from oblique-beam)
from beamforming.oblique_manifold import ZeroColumnError, inner, norm, retract, transport
from beamforming.smoothed_objective import SmoothedObjective
from tools.logging import log_debug

DEFAULT_MAX_ITERS = 200
DEFAULT_ARMIJO_C = 1e-4
DEFAULT_ARMIJO_FLOOR = 1e-10
DEFAULT_MAX_HALVINGS = 60
# relative default for the stopping gradient norm: 1e-6 (1 + |F(X0)|)
RELATIVE_GRAD_TOL = 1e-6
HS_DENOMINATOR_TOL = 1e-30

RcgConfig = namedtuple('RcgConfig', ('grad_tol', 'max_iters', 'armijo_c', 'armijo_floor', 'max_halvings'),
                       defaults=(None, DEFAULT_MAX_ITERS, DEFAULT_ARMIJO_C, DEFAULT_ARMIJO_FLOOR,
                                 DEFAULT_MAX_HALVINGS))
RcgConfig.__doc__ = """
Settings of the inner solver. 'grad_tol' None selects the relative default
1e-6 (1 + |F(X0, t, mu)|).
"""

ArmijoStep = namedtuple('ArmijoStep', ('alpha', 'point', 'value'))

RcgResult = namedtuple('RcgResult', ('point', 'iterations', 'grad_norm', 'value', 'values', 'stop_reason'))
RcgResult.__doc__ = """
Outcome of one rcg_solve call: final point, number of accepted steps, final
Riemannian gradient norm and smoothed value, the objective trace (one entry
per iterate, starting with X0) and why the iteration stopped.
"""

STOP_GRAD_TOL = 'grad_tol'
STOP_MAX_ITERS = 'max_iters'
STOP_STALLED = 'stalled'


class StepStalledError(Exception):
    """
    Exception to be raised when the Armijo line search exhausts its halvings
    without sufficient increase, i.e., the iteration is stationary at numerical
    precision. The attribute 'alpha' holds the last step size tried.
    """

    def __init__(self, alpha, message):
        super().__init__(message)
        self.alpha = alpha


def check_rcg_config(cfg):
    """
    Validate an RcgConfig

    Raises:
        ValueError: if any setting is out of range
    """
    if cfg.grad_tol is not None and not cfg.grad_tol > 0:
        raise ValueError(f"grad_tol must be positive, got {cfg.grad_tol}")
    if cfg.max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {cfg.max_iters}")
    if not 0.0 < cfg.armijo_c < 1.0:
        raise ValueError(f"armijo_c must lie in (0, 1), got {cfg.armijo_c}")
    if not cfg.armijo_floor > 0:
        raise ValueError(f"armijo_floor must be positive, got {cfg.armijo_floor}")
    if cfg.max_halvings < 1:
        raise ValueError(f"max_halvings must be >= 1, got {cfg.max_halvings}")


def hs_coefficient(W, G, Z, Y):
    """
    Modified Hestenes-Stiefel coefficient nu = max(0, <G-Z, G> / <G-Z, Y>).

    Args:
        W (ndarray): current point
        G (ndarray): current Riemannian gradient
        Z (ndarray): previous gradient transported to W
        Y (ndarray): previous direction transported to W

    Returns:
        (float): nu >= 0, 0 when |<G-Z, Y>| < 1e-30
    """
    diff = G - Z
    denominator = inner(W, diff, Y)
    if abs(denominator) < HS_DENOMINATOR_TOL:
        return 0.0
    return max(0.0, inner(W, diff, G) / denominator)


def conjugate_direction(W, G, prev_D=None, prev_G=None):
    """
    Conjugate search direction D = G + nu Y with Y and Z the transports of the
    previous direction and gradient. Falls back to D = G without history or
    when <G, D> < 0.

    Args:
        W (ndarray): current point
        G (ndarray): Riemannian gradient at W
        prev_D (ndarray): direction of the previous iteration (or None)
        prev_G (ndarray): gradient of the previous iteration (or None)

    Returns:
        (ndarray): ascent direction, tangent at W
    """
    if prev_D is None or prev_G is None:
        return G
    Y = transport(W, prev_D)
    Z = transport(W, prev_G)
    D = G + hs_coefficient(W, G, Z, Y) * Y
    if inner(W, G, D) < 0.0:
        return G
    return D


def armijo_search(objective, W, D, prev_W=None, cfg=None, value=None, grad=None, prev_value=None):
    """
    Backtracking line search along the retraction curve R_W(alpha D).

    The initial step is 1/||D|| without a previous iterate, otherwise
    2 (F(W) - F(prev_W)) / <grad, D>; it is reset to 1/||D|| whenever
    alpha ||D|| <= armijo_floor. The step is halved until
    F(R_W(alpha D)) - F(W) >= armijo_c alpha <grad, D>.

    Args:
        objective (SmoothedObjective): objective to increase
        W (ndarray): current point
        D (ndarray): ascent direction at W
        prev_W (ndarray): previous iterate, optional
        cfg (RcgConfig): line search constants (defaults if None)
        value (float): F(W) if already known
        grad (ndarray): Riemannian gradient at W if already known
        prev_value (float): F(prev_W) if already known

    Returns:
        (ArmijoStep): accepted step size, new point and its objective value

    Raises:
        StepStalledError: if no sufficient increase after max_halvings halvings
    """
    cfg = cfg or RcgConfig()
    if value is None:
        value = objective.value(W)
    if grad is None:
        grad = objective.gradient(W)
    slope = inner(W, grad, D)
    d_norm = norm(D)

    if prev_W is None:
        alpha = 1.0 / d_norm
    else:
        if prev_value is None:
            prev_value = objective.value(prev_W)
        alpha = 2.0 * (value - prev_value) / slope
    if not np.isfinite(alpha) or alpha * d_norm <= cfg.armijo_floor:
        alpha = 1.0 / d_norm

    for _ in range(cfg.max_halvings + 1):
        try:
            trial = retract(W, alpha * D)
        except ZeroColumnError:
            alpha /= 2.0
            continue
        trial_value = objective.value(trial)
        if trial_value - value >= cfg.armijo_c * alpha * slope:
            return ArmijoStep(alpha, trial, trial_value)
        alpha /= 2.0

    raise StepStalledError(alpha, f"no sufficient increase after {cfg.max_halvings} halvings "
                                  f"(slope {slope:g}, ||D|| {d_norm:g})")


def rcg_solve(prob, X0, t, mu, cfg=None):
    """
    Riemannian conjugate gradient ascent of F(., t, mu) from X0.

    Stops when ||G_n||_F <= grad_tol, after max_iters accepted steps, or when
    the line search stalls (treated as convergence). The first step of every
    call uses the no-history branch of the line search.

    Args:
        prob (NormalizedProblem): normalized problem
        X0 (ndarray): starting point on the manifold
        t (float): SINR level
        mu (float): smoothing parameter
        cfg (RcgConfig): solver settings (defaults if None)

    Returns:
        (RcgResult): final point, iteration count, gradient norm and trace
    """
    fn = sys._getframe().f_code.co_name

    cfg = cfg or RcgConfig()
    check_rcg_config(cfg)
    objective = SmoothedObjective(prob, t, mu)

    X = X0
    value, G = objective.value_and_gradient(X)
    grad_tol = cfg.grad_tol if cfg.grad_tol is not None else RELATIVE_GRAD_TOL * (1.0 + abs(value))
    values = [value]
    prev_X = prev_G = prev_D = prev_value = None
    iterations = 0

    while True:
        grad_norm = norm(G)
        if grad_norm <= grad_tol:
            stop_reason = STOP_GRAD_TOL
            break
        if iterations >= cfg.max_iters:
            stop_reason = STOP_MAX_ITERS
            break
        D = conjugate_direction(X, G, prev_D, prev_G)
        try:
            step = armijo_search(objective, X, D, prev_W=prev_X, cfg=cfg,
                                 value=value, grad=G, prev_value=prev_value)
        except StepStalledError as err:
            log_debug(f"{fn}(): line search stalled at iteration {iterations}: {err}")
            stop_reason = STOP_STALLED
            break
        prev_X, prev_G, prev_D, prev_value = X, G, D, value
        X, value = step.point, step.value
        G = objective.gradient(X)
        values.append(value)
        iterations += 1

    log_debug(f"{fn}(): t={t!r} mu={mu!r} stopped ({stop_reason}) after {iterations} iterations, "
              f"F={value!r}, ||G||={grad_norm:.3e} (tol {grad_tol:.3e})")
    return RcgResult(X, iterations, grad_norm, value, np.array(values), stop_reason)
