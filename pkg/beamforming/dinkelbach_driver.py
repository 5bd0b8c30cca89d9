# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# license: GPLv2
#

# Standard library imports
from collections import namedtuple
import math
import sys
import time

# Third party imports (anything installed into the local Python environment)
import numpy as np

# Local application imports (anything from oblique-beam)
from beamforming.oblique_manifold import random_point
from beamforming.problem_model import denormalize, margin, normalize, sinr_min, sinr_table
from beamforming.rcg_solver import RcgConfig, check_rcg_config, rcg_solve
from tools.logging import log

DEFAULT_MU0 = 1.0
DEFAULT_EPS = 1e-5
DEFAULT_MAX_OUTER = 100

DtConfig = namedtuple('DtConfig', ('mu0', 'eps', 'max_outer', 'rcg'),
                      defaults=(DEFAULT_MU0, DEFAULT_EPS, DEFAULT_MAX_OUTER, RcgConfig()))

OuterRecord = namedtuple('OuterRecord', ('outer_iter', 't', 'mu', 'inner_iters', 'accepted', 'improvement'))
OuterRecord.__doc__ = """
One row of the convergence trace. Row 0 describes the initial point; for
k >= 1 't' and 'mu' are t_k and mu_k after the acceptance test, 'improvement'
is F(W_rcg, t_{k-1}) - F(W^(k-1), t_{k-1}).
"""


class SolveReport(namedtuple('SolveReport', ('point', 't', 'trace', 'per_user_sinr', 'wall_time',
                                             'converged', 'cap_hit', 'degenerate'))):
    """
    Result of dt_rcg_solve: final beam matrix and min weighted SINR, the
    per-outer-iteration trace, the final per-user SINR table, wall time in
    seconds and termination flags ('converged' means mu dropped below eps,
    'cap_hit' means max_outer was reached first, 'degenerate' means no
    serving channel carries any energy).
    """
    __slots__ = ()

    @property
    def outer_iters(self):
        return len(self.trace) - 1

    @property
    def inner_iters(self):
        return sum(rec.inner_iters for rec in self.trace)


def check_dt_config(cfg):
    """
    Validate a DtConfig (mu0 > eps > 0, max_outer >= 1, valid RcgConfig)

    Raises:
        ValueError: if any setting is out of range
    """
    if not (math.isfinite(cfg.mu0) and cfg.eps > 0 and cfg.mu0 > cfg.eps):
        raise ValueError(f"expected mu0 > eps > 0, got mu0={cfg.mu0}, eps={cfg.eps}")
    if cfg.max_outer < 1:
        raise ValueError(f"max_outer must be >= 1, got {cfg.max_outer}")
    check_rcg_config(cfg.rcg)


def dt_rcg_solve(prob, W0, cfg=None):
    """
    Dinkelbach-type outer loop with adaptive smoothing. Starting from
    t_0 = SINR(W_0), every round runs the conjugate gradient solver on
    F(., t_{k-1}, mu_{k-1}) from W^(k-1). A result that strictly increases
    F(., t_{k-1}) is accepted and t is updated; otherwise the round is rejected
    and mu is halved. The loop stops once mu < eps or after max_outer rounds.

    Args:
        prob (NormalizedProblem): normalized problem
        W0 (ndarray): initial point on the manifold
        cfg (DtConfig): solver settings (defaults if None)

    Returns:
        (SolveReport): final point, achieved min weighted SINR and traces
    """
    fn = sys._getframe().f_code.co_name

    cfg = cfg or DtConfig()
    check_dt_config(cfg)
    start = time.perf_counter()

    W = W0
    t = sinr_min(prob, W)
    mu = cfg.mu0
    trace = [OuterRecord(0, t, mu, 0, True, 0.0)]
    converged = cap_hit = False
    degenerate = prob.is_degenerate()

    if degenerate:
        log(f"{fn}(): no serving channel carries energy, min SINR is 0 for every beam matrix")
    else:
        for k in range(1, cfg.max_outer + 1):
            result = rcg_solve(prob, W, t, mu, cfg.rcg)
            new_value, _ = margin(prob, result.point, t)
            old_value, _ = margin(prob, W, t)
            # old_value = F(W^(k-1), t_{k-1}) is 0 up to roundoff, so the second
            # test only matters at roundoff level and keeps {t_k} non-decreasing
            new_t = sinr_min(prob, result.point)
            accepted = new_value > old_value and new_t >= t
            if accepted:
                W = result.point
                t = new_t
            else:
                mu = mu / 2.0
            trace.append(OuterRecord(k, t, mu, result.iterations, accepted, new_value - old_value))
            log(f"{fn}(): outer iteration {k}: {'accepted' if accepted else 'rejected'}, "
                f"t={t!r}, mu={mu!r}, inner iterations {result.iterations} ({result.stop_reason})")
            if mu < cfg.eps:
                converged = True
                break
        else:
            cap_hit = True
            log(f"{fn}(): reached max_outer={cfg.max_outer} with mu={mu!r} >= eps={cfg.eps!r}")

    return SolveReport(W, t, trace, sinr_table(prob, W), time.perf_counter() - start,
                       converged, cap_hit, degenerate)


def solve_physical(inst, seed, cfg=None):
    """
    End-to-end solve of a raw instance: normalize, draw a random initial point
    from 'seed', run dt_rcg_solve and map the result back to physical
    beamformers.

    Args:
        inst (NetworkInstance): raw instance
        seed (int or SeedSequence): seed of the initial point
        cfg (DtConfig): solver settings (defaults if None)

    Returns:
        tuple of 2 elements containing
        - physical (PhysicalBeamformers): beamformers within the power budgets
        - report (SolveReport): solver report on the normalized problem

    Raises:
        InstanceValidationError: if the instance is invalid
    """
    fn = sys._getframe().f_code.co_name

    prob = normalize(inst)
    W0 = random_point(inst.M, inst.L, seed)
    report = dt_rcg_solve(prob, W0, cfg)
    physical = denormalize(prob, report.point, inst.budgets)
    log(f"{fn}(): L={inst.L} K={inst.K} M={inst.M}: min weighted SINR {report.t!r} after "
        f"{report.outer_iters} outer / {report.inner_iters} inner iterations, "
        f"used power {np.array2string(physical.used_power, precision=6)}")
    return physical, report
