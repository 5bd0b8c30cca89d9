# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# license: GPLv2
#

# Standard library imports
import csv
import sys

# Third party imports (anything installed into the local Python environment)
# (none yet)

# Local application imports (anything from oblique-beam)
from beamforming.dinkelbach_driver import DtConfig, check_dt_config
from beamforming.rcg_solver import RcgConfig
from tools import config, format_float, to_db
from tools.instance_io import complex_to_pairs
from tools.logging import log

SOLVER = "solver"
MU0 = "mu0"
EPS = "eps"
MAX_OUTER = "max_outer"
MAX_INNER = "max_inner"
GRAD_TOL = "grad_tol"
ARMIJO_C = "armijo_c"
ARMIJO_FLOOR = "armijo_floor"
MAX_HALVINGS = "max_halvings"

TRACE_HEADER = ['outer_iter', 't_k', 'mu_k', 'inner_iters', 'accepted']


def get_solver_cfg(cfg, overrides=None):
    """
    Gets solver settings from the 'solver' section of the configuration and
    applies command line overrides

    Args:
        cfg (ConfigParser): ConfigParser instance holding full configuration
            (typically read from 'app.cfg')
        overrides (dict): maps setting names (MU0, EPS, ...) to values; None
            values are ignored

    Returns:
        (DtConfig): validated solver settings

    Raises:
        ValueError: if a setting is out of range
        ConfigValueError: if a configuration value is not a number
    """
    fn = sys._getframe().f_code.co_name

    dt_defaults = DtConfig()
    rcg_defaults = RcgConfig()
    settings = {
        MU0: config.get_float(cfg, SOLVER, MU0, dt_defaults.mu0),
        EPS: config.get_float(cfg, SOLVER, EPS, dt_defaults.eps),
        MAX_OUTER: config.get_int(cfg, SOLVER, MAX_OUTER, dt_defaults.max_outer),
        MAX_INNER: config.get_int(cfg, SOLVER, MAX_INNER, rcg_defaults.max_iters),
        GRAD_TOL: config.get_float(cfg, SOLVER, GRAD_TOL, rcg_defaults.grad_tol),
        ARMIJO_C: config.get_float(cfg, SOLVER, ARMIJO_C, rcg_defaults.armijo_c),
        ARMIJO_FLOOR: config.get_float(cfg, SOLVER, ARMIJO_FLOOR, rcg_defaults.armijo_floor),
        MAX_HALVINGS: config.get_int(cfg, SOLVER, MAX_HALVINGS, rcg_defaults.max_halvings),
    }
    for key, value in (overrides or {}).items():
        if value is not None:
            settings[key] = value

    rcg = RcgConfig(grad_tol=settings[GRAD_TOL], max_iters=settings[MAX_INNER],
                    armijo_c=settings[ARMIJO_C], armijo_floor=settings[ARMIJO_FLOOR],
                    max_halvings=settings[MAX_HALVINGS])
    solver_cfg = DtConfig(mu0=settings[MU0], eps=settings[EPS], max_outer=settings[MAX_OUTER], rcg=rcg)
    check_dt_config(solver_cfg)
    log(f"{fn}(): {solver_cfg}")
    return solver_cfg


def result_document(physical, report, trace_file=None):
    """
    Create the JSON-serializable result of a single solve

    Args:
        physical (PhysicalBeamformers): beamformers returned by solve_physical
        report (SolveReport): solver report
        trace_file (string): path of the trace CSV, if one was written

    Returns:
        (dict): result document
    """
    final_db = to_db(report.t)
    doc = {
        'final_sinr_linear': report.t,
        # JSON has no -Infinity
        'final_sinr_dB': final_db if report.t > 0 else None,
        'beamformers': [complex_to_pairs(physical.beamformers[:, l]) for l in range(physical.beamformers.shape[1])],
        'used_power': [float(p) for p in physical.used_power],
        'outer_iters': report.outer_iters,
        'inner_iters': report.inner_iters,
        'converged': report.converged,
        'cap_hit': report.cap_hit,
        'degenerate': report.degenerate,
    }
    if trace_file:
        doc['trace_file'] = trace_file
    return doc


def write_trace_csv(report, fh):
    """
    Write the per-outer-iteration convergence trace as CSV (row 0 is the
    initial point)

    Args:
        report (SolveReport): solver report
        fh (file): open text file

    Returns:
        None (implicitly)
    """
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(TRACE_HEADER)
    for rec in report.trace:
        writer.writerow([rec.outer_iter, format_float(rec.t), format_float(rec.mu), rec.inner_iters,
                         int(rec.accepted)])
