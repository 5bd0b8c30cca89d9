#!/usr/bin/env python3
#
# Command line tool for max-min-fair coordinated multicell multicast
# beamforming under per-base-station power constraints.
#
# Subcommands
#  - solve: solve one instance given as JSON file, print/write a JSON result
#  - sweep: Monte-Carlo sweep of the average minimum SINR over the per-BS
#    power, written as CSV
#  - trace: per-outer-iteration convergence trace of one solve as CSV
#
# Exit codes: 0 success, 2 validation error, 3 I/O error.
#
# This file is part of oblique-beam.
#
# license: GPLv2
#

# Standard library imports
from contextlib import contextmanager
import json
import sys

# Third party imports (anything installed into the local Python environment)
# (none yet)

# Local application imports (anything from oblique-beam)
from beamforming.dinkelbach_driver import solve_physical
from beamforming.problem_model import InstanceValidationError
from tasks import solve as solve_task
from tasks import sweep as sweep_task
from tools import config, from_db
from tools.args import CMD_SOLVE, CMD_SWEEP, CMD_TRACE, oblique_beam_parse
from tools.config import ConfigValueError
from tools.instance_io import load_instance
from tools.logging import error, get_log_file, log, set_debug, set_log_file

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3

# trace flags that only describe a scenario draw, as (attribute, flag) pairs
SCENARIO_DRAW_FLAGS = [
    ('cells', '--cells'),
    ('users', '--users'),
    ('antennas', '--antennas'),
    ('eps', '--eps'),
    ('gamma', '--gamma'),
    ('power_db', '--power-db'),
    ('trial', '--trial'),
]


@contextmanager
def open_output(path):
    """
    Yields a writable text file for 'path', or stdout if path is None
    """
    if path is None:
        yield sys.stdout
    else:
        with open(path, 'w', newline='') as fh:
            yield fh


def read_instance(path):
    """
    Load an instance, exiting with the code matching the failure

    Args:
        path (string): path to JSON instance file

    Returns:
        (NetworkInstance): the instance; never returns on failure
    """
    try:
        return load_instance(path)
    except InstanceValidationError as err:
        error(f"invalid instance file {path}: field '{err.field}': {err.message}", rc=EXIT_VALIDATION)
    except OSError as err:
        error(f"unable to read instance file {path}: {err}", rc=EXIT_IO)


def scenario_from_opts(cfg, opts):
    """
    Combine the 'scenario' section of the configuration with command line
    flags (flags win)
    """
    scenario_cfg = sweep_task.get_scenario_cfg(cfg)
    overrides = {
        sweep_task.CELLS: opts.cells,
        sweep_task.USERS: opts.users,
        sweep_task.ANTENNAS: opts.antennas,
        sweep_task.INTERCELL_VARIANCE: opts.eps,
        sweep_task.GAMMA: opts.gamma,
        sweep_task.TRIALS: getattr(opts, 'trials', None),
        sweep_task.SEED: opts.seed,
    }
    scenario_cfg = scenario_cfg._replace(**{key: value for key, value in overrides.items() if value is not None})
    sweep_task.check_scenario_cfg(scenario_cfg)
    return scenario_cfg


def cmd_solve(opts, solver_cfg):
    """
    Solve a single instance file and emit the JSON result

    Returns:
        (int): exit code
    """
    inst = read_instance(opts.instance_file)
    physical, report = solve_physical(inst, opts.seed, solver_cfg)
    doc = solve_task.result_document(physical, report, trace_file=opts.trace_file)
    try:
        if opts.trace_file:
            with open_output(opts.trace_file) as fh:
                solve_task.write_trace_csv(report, fh)
        with open_output(opts.output) as fh:
            json.dump(doc, fh, indent=2)
            fh.write('\n')
    except OSError as err:
        error(f"unable to write result: {err}", rc=EXIT_IO)
    return EXIT_OK


def cmd_sweep(opts, cfg, solver_cfg):
    """
    Run a Monte-Carlo sweep and emit the summary CSV

    Returns:
        (int): exit code
    """
    try:
        scenario_cfg = scenario_from_opts(cfg, opts)
        p_values_db = sweep_task.power_grid(opts.pmin_db, opts.pmax_db, opts.pstep_db)
    except (ValueError, ConfigValueError) as err:
        error(f"invalid sweep settings: {err}", rc=EXIT_VALIDATION)

    try:
        result = sweep_task.run_sweep(scenario_cfg, p_values_db, solver_cfg)
    except ValueError as err:
        error(f"invalid sweep settings: {err}", rc=EXIT_VALIDATION)
    except sweep_task.SweepAbortedError as err:
        error(f"sweep aborted: {err} (see {get_log_file()})", rc=1)

    try:
        with open_output(opts.output) as fh:
            sweep_task.write_sweep_csv(result, fh)
        if opts.records:
            with open_output(opts.records) as fh:
                sweep_task.write_records_csv(result, fh)
    except OSError as err:
        error(f"unable to write sweep results: {err}", rc=EXIT_IO)
    return EXIT_OK


def cmd_trace(opts, cfg, solver_cfg):
    """
    Solve an instance file or a scenario draw and emit its convergence trace

    Returns:
        (int): exit code
    """
    if opts.instance_file:
        mixed = [flag for attr, flag in SCENARIO_DRAW_FLAGS if getattr(opts, attr) is not None]
        if mixed:
            error(f"{', '.join(mixed)} only apply to scenario draws, not to instance file "
                  f"{opts.instance_file}", rc=EXIT_VALIDATION)
        inst = read_instance(opts.instance_file)
        init_seed = opts.seed or 0
    else:
        try:
            scenario_cfg = scenario_from_opts(cfg, opts)
        except (ValueError, ConfigValueError) as err:
            error(f"invalid scenario settings: {err}", rc=EXIT_VALIDATION)
        trial = opts.trial or 0
        power_db = opts.power_db if opts.power_db is not None else 0.0
        inst = sweep_task.generate_instance(scenario_cfg, trial, from_db(power_db))
        _, init_seed = sweep_task.trial_seeds(scenario_cfg.seed, trial)

    _, report = solve_physical(inst, init_seed, solver_cfg)
    try:
        with open_output(opts.output) as fh:
            solve_task.write_trace_csv(report, fh)
    except OSError as err:
        error(f"unable to write trace: {err}", rc=EXIT_IO)
    return EXIT_OK


def main(args=None):
    """
    Main function which parses command line arguments, reads the
    configuration, sets up logging and runs the requested subcommand.

    Args:
        args (list): command line arguments (default sys.argv[1:])

    Returns:
        (int): exit code (validation and I/O failures exit via error())
    """
    opts = oblique_beam_parse(args)

    set_debug(opts.debug)
    cfg = config.read_config(opts.config)
    log_path = config.get_log_path(cfg)
    if log_path:
        set_log_file(log_path)
    log(f"oblique_beam {opts.command} started, logging to '{get_log_file()}'")

    overrides = {
        solve_task.MU0: opts.mu0,
        solve_task.EPS: opts.mu_eps,
        solve_task.MAX_OUTER: opts.max_outer,
        solve_task.MAX_INNER: opts.max_inner,
        solve_task.GRAD_TOL: opts.grad_tol,
    }
    try:
        solver_cfg = solve_task.get_solver_cfg(cfg, overrides)
    except (ValueError, ConfigValueError) as err:
        error(f"invalid solver settings: {err}", rc=EXIT_VALIDATION)

    if opts.command == CMD_SOLVE:
        return cmd_solve(opts, solver_cfg)
    elif opts.command == CMD_SWEEP:
        return cmd_sweep(opts, cfg, solver_cfg)
    elif opts.command == CMD_TRACE:
        return cmd_trace(opts, cfg, solver_cfg)


if __name__ == "__main__":
    sys.exit(main())
