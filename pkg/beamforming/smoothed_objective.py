# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# Exponential (log-sum-exp) smoothing of F(W, t) = min_{l,k} f_{l,k}(W, t):
#
#   F(W, t, mu) = -mu log sum_{l,k} exp(-f_{l,k}(W, t) / mu)
#
# together with its softmax weights, Euclidean gradient and Riemannian
# gradient on the oblique manifold.
#
# license: GPLv2
#

# Standard library imports
from collections import namedtuple
import math

# Third party imports (anything installed into the local Python environment)
import numpy as np
from scipy.special import logsumexp, softmax

# Local application imports (anything from oblique-beam)
from beamforming.oblique_manifold import project_tangent
from beamforming.problem_model import channel_projections, split_gains

SmoothingParams = namedtuple('SmoothingParams', ('t', 'mu'))


def check_smoothing_params(params):
    """
    Validate smoothing parameters (mu > 0, t >= 0, both finite)

    Raises:
        ValueError: if any invariant is violated
    """
    t, mu = params
    if not (math.isfinite(t) and math.isfinite(mu)):
        raise ValueError(f"t and mu must be finite, got t={t}, mu={mu}")
    if mu <= 0.0:
        raise ValueError(f"smoothing parameter mu must be positive, got {mu}")
    if t < 0.0:
        raise ValueError(f"SINR level t must be non-negative, got {t}")


class GradientWorkspace:
    """
    Everything derived from one beam matrix W at fixed (t, mu): the inner
    products h_{j,l,k}^H w_j, the margin table f_{l,k}, the smoothed value and
    the softmax weights beta_{m,k}. Value, weights and gradient all reuse the
    same inner products, so one evaluation costs O(L^2 M K).
    """

    def __init__(self, prob, W, params):
        check_smoothing_params(params)
        self.prob = prob
        self.point = W
        self.params = SmoothingParams(float(params[0]), float(params[1]))
        t, mu = self.params
        L = prob.L

        self.projections = channel_projections(prob, W)
        signal, interference = split_gains(np.abs(self.projections) ** 2)
        self.per_user = signal / prob.targets[:, None] - t * (interference + 1.0)

        # shift by the minimum so that exp() never overflows, however small mu
        self.f_min = float(np.min(self.per_user))
        shifted = -(self.per_user - self.f_min) / mu
        self.value = self.f_min - mu * float(logsumexp(shifted))
        self.weights = softmax(shifted, axis=None)

        # a[l, m] = 1/Gamma_l on the diagonal, -t elsewhere
        self.coefficients = np.where(np.eye(L, dtype=bool), (1.0 / prob.targets)[:, None], -t)

    def euclidean_gradient(self):
        """
        Column l is 2 sum_{m,k} a_{l,m} beta_{m,k} (h_{l,m,k}^H w_l) h_{l,m,k}
        """
        scaled = 2.0 * self.coefficients[:, :, None] * self.weights[None, :, :] * self.projections
        return np.einsum('lmk,lmkd->dl', scaled, self.prob.channels)

    def riemannian_gradient(self):
        return project_tangent(self.point, self.euclidean_gradient())


def smoothed_value(prob, W, params):
    """
    Exponential smoothing F(W, t, mu) of the margin F(W, t)

    Args:
        prob (NormalizedProblem): normalized problem
        W (ndarray): beam matrix
        params (SmoothingParams): (t, mu)

    Returns:
        (float): f_min - mu log sum exp(-(f_{l,k} - f_min) / mu)
    """
    return GradientWorkspace(prob, W, params).value


def softmax_weights(prob, W, params):
    """
    Weights beta_{m,k} = exp(-f_{m,k}/mu) / sum exp(-f_{j,i}/mu), shape (L, K)
    """
    return GradientWorkspace(prob, W, params).weights


def euclidean_gradient(prob, W, params):
    """
    Euclidean gradient of F(W, t, mu), an (M+1) x L complex matrix.

    The convention is that of the realified variables: the directional
    derivative of F along a perturbation Delta is Re Tr(grad^H Delta).
    """
    return GradientWorkspace(prob, W, params).euclidean_gradient()


def riemannian_gradient(prob, W, params, egrad_fn=euclidean_gradient):
    """
    Riemannian gradient grad F(W) = egrad - W ddiag(Re(W^H egrad))

    Args:
        prob (NormalizedProblem): normalized problem
        W (ndarray): point on the manifold
        params (SmoothingParams): (t, mu)
        egrad_fn (callable): computes the Euclidean gradient from
            (prob, W, params)

    Returns:
        (ndarray): tangent vector at W
    """
    return project_tangent(W, egrad_fn(prob, W, params))


class SmoothedObjective:
    """
    F(., t, mu) for fixed (t, mu) as seen by the line search and the conjugate
    gradient iteration. The workspace of the most recently evaluated point is
    kept, so evaluating the value and then the gradient at an accepted trial
    point computes the inner products once. Points are never mutated in place.
    """

    def __init__(self, prob, t, mu):
        self.prob = prob
        self.params = SmoothingParams(t, mu)
        check_smoothing_params(self.params)
        self._workspace = None

    def workspace(self, W):
        if self._workspace is None or self._workspace.point is not W:
            self._workspace = GradientWorkspace(self.prob, W, self.params)
        return self._workspace

    def value(self, W):
        return self.workspace(W).value

    def gradient(self, W):
        return self.workspace(W).riemannian_gradient()

    def value_and_gradient(self, W):
        ws = self.workspace(W)
        return ws.value, ws.riemannian_gradient()
