# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# Monte-Carlo harness: seeded multicell scenarios with i.i.d. Rayleigh fading,
# sweeps over the per-BS power budget and aggregation of the average minimum
# SINR.
#
# license: GPLv2
#

# Standard library imports
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
import csv
import math
import sys
import time

# Third party imports (anything installed into the local Python environment)
import numpy as np

# Local application imports (anything from oblique-beam)
from beamforming.dinkelbach_driver import solve_physical
from beamforming.problem_model import NetworkInstance, is_power_feasible, physical_sinr_table
from tools import config, format_float, from_db, get_num_workers, to_db
from tools.logging import log

SCENARIO = "scenario"
CELLS = "cells"
USERS = "users"
ANTENNAS = "antennas"
INTRACELL_VARIANCE = "intracell_variance"
INTERCELL_VARIANCE = "intercell_variance"
NOISE_POWER = "noise_power"
GAMMA = "gamma"
BUDGET_PATTERN = "budget_pattern"
TRIALS = "trials"
SEED = "seed"

# budget pattern [P, P, 2P], repeated over the BS index for L != 3
DEFAULT_BUDGET_PATTERN = (1.0, 1.0, 2.0)
MAX_FAILURE_RATIO = 0.01

SWEEP_HEADER = ['P_dB', 'mean_min_sinr_dB', 'stderr_dB', 'mean_outer_iters', 'mean_inner_iters', 'mean_ms']
RECORDS_HEADER = ['P_dB', 'trial', 'min_sinr', 'min_sinr_dB', 'outer_iters', 'inner_iters', 'ms',
                  'cap_hit', 'failed']

ScenarioConfig = namedtuple('ScenarioConfig', ('cells', 'users', 'antennas', 'intracell_variance',
                                               'intercell_variance', 'noise_power', 'gamma',
                                               'budget_pattern', 'trials', 'seed'),
                            defaults=(3, 10, 8, 1.0, 0.25, 1.0, 1.0, None, 500, 0))
ScenarioConfig.__doc__ = """
Scenario of the Monte-Carlo experiments. 'budget_pattern' None selects the
pattern [1, 1, 2] repeated over the BS index; budgets are the pattern scaled
by the swept power P.
"""

TrialRecord = namedtuple('TrialRecord', ('p_db', 'trial', 'min_sinr', 'min_sinr_db', 'outer_iters',
                                         'inner_iters', 'wall_ms', 'cap_hit', 'failed', 'message'))
SweepPoint = namedtuple('SweepPoint', ('p_db', 'mean_min_sinr_db', 'stderr_db', 'mean_outer_iters',
                                       'mean_inner_iters', 'mean_ms'))
SweepResult = namedtuple('SweepResult', ('points', 'records'))


class SweepAbortedError(Exception):
    """
    Exception to be raised when more than 1% of the trials of a sweep fail
    """
    pass


def get_scenario_cfg(cfg):
    """
    Gets scenario settings from configuration, falling back to the defaults
    of ScenarioConfig for absent settings

    Args:
        cfg (ConfigParser): ConfigParser instance holding full configuration
            (typically read from 'app.cfg')

    Returns:
        (ScenarioConfig): scenario settings
    """
    fn = sys._getframe().f_code.co_name

    defaults = ScenarioConfig()
    scenario_cfg = ScenarioConfig(
        cells=config.get_int(cfg, SCENARIO, CELLS, defaults.cells),
        users=config.get_int(cfg, SCENARIO, USERS, defaults.users),
        antennas=config.get_int(cfg, SCENARIO, ANTENNAS, defaults.antennas),
        intracell_variance=config.get_float(cfg, SCENARIO, INTRACELL_VARIANCE, defaults.intracell_variance),
        intercell_variance=config.get_float(cfg, SCENARIO, INTERCELL_VARIANCE, defaults.intercell_variance),
        noise_power=config.get_float(cfg, SCENARIO, NOISE_POWER, defaults.noise_power),
        gamma=config.get_float(cfg, SCENARIO, GAMMA, defaults.gamma),
        budget_pattern=config.get_float_list(cfg, SCENARIO, BUDGET_PATTERN, defaults.budget_pattern),
        trials=config.get_int(cfg, SCENARIO, TRIALS, defaults.trials),
        seed=config.get_int(cfg, SCENARIO, SEED, defaults.seed),
    )
    log(f"{fn}(): {scenario_cfg}")
    return scenario_cfg


def check_scenario_cfg(cfg):
    """
    Validate a ScenarioConfig

    Raises:
        ValueError: naming the offending setting
    """
    for name in (CELLS, USERS, ANTENNAS, TRIALS):
        if getattr(cfg, name) < 1:
            raise ValueError(f"{name} must be >= 1, got {getattr(cfg, name)}")
    for name in (INTRACELL_VARIANCE, INTERCELL_VARIANCE, NOISE_POWER, GAMMA):
        value = getattr(cfg, name)
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"{name} must be positive and finite, got {value}")
    if cfg.seed < 0:
        raise ValueError(f"{SEED} must be non-negative, got {cfg.seed}")
    pattern = budget_pattern(cfg)
    if not all(math.isfinite(p) and p > 0 for p in pattern):
        raise ValueError(f"{BUDGET_PATTERN} entries must be positive and finite, got {pattern}")


def budget_pattern(cfg):
    """
    Returns the per-BS budget multipliers (length L) of a scenario

    Raises:
        ValueError: if an explicit pattern does not have L entries
    """
    if cfg.budget_pattern is None:
        return tuple(DEFAULT_BUDGET_PATTERN[l % len(DEFAULT_BUDGET_PATTERN)] for l in range(cfg.cells))
    if len(cfg.budget_pattern) != cfg.cells:
        raise ValueError(f"{BUDGET_PATTERN} needs {cfg.cells} entries, got {len(cfg.budget_pattern)}")
    return tuple(cfg.budget_pattern)


def trial_seeds(base_seed, trial_index):
    """
    Independent seed streams of one trial, derived from (base seed, trial
    index) only: the first drives the channels, the second the initial point.
    """
    return np.random.SeedSequence(base_seed, spawn_key=(trial_index,)).spawn(2)


def generate_instance(cfg, trial_index, power=1.0):
    """
    Draw the channels of one trial. Serving-cell channels (j == l) are i.i.d.
    CN(0, intracell_variance) per entry, cross-cell channels (j != l)
    CN(0, intercell_variance).

    Args:
        cfg (ScenarioConfig): scenario settings
        trial_index (int): index of the trial, selects the random stream
        power (float): swept power P (linear), budgets are P times the pattern

    Returns:
        (NetworkInstance): the instance, identical for identical (seed, trial)
    """
    L, K, M = cfg.cells, cfg.users, cfg.antennas
    channel_seed, _ = trial_seeds(cfg.seed, trial_index)
    rng = np.random.default_rng(channel_seed)
    standard = (rng.standard_normal((L, L, K, M)) + 1j * rng.standard_normal((L, L, K, M))) / np.sqrt(2.0)
    variance = np.where(np.eye(L, dtype=bool), cfg.intracell_variance, cfg.intercell_variance)
    channels = np.sqrt(variance)[:, :, None, None] * standard
    return NetworkInstance(channels,
                           np.full((L, K), cfg.noise_power),
                           np.full(L, cfg.gamma),
                           power * np.asarray(budget_pattern(cfg)))


def run_trial(scenario_cfg, solver_cfg, p_db, trial_index):
    """
    Solve one (power, trial) work item. Exceptions are caught and turned into
    a failed record.

    Returns:
        (TrialRecord): outcome of the trial
    """
    fn = sys._getframe().f_code.co_name

    start = time.perf_counter()
    try:
        inst = generate_instance(scenario_cfg, trial_index, from_db(p_db))
        _, init_seed = trial_seeds(scenario_cfg.seed, trial_index)
        physical, report = solve_physical(inst, init_seed, solver_cfg)
        if not is_power_feasible(physical, inst.budgets):
            raise RuntimeError(f"power budget violated: used {physical.used_power}, budgets {inst.budgets}")
        # the report is in normalized units; cross-check against the raw instance
        physical_t = float(np.min(physical_sinr_table(inst, physical.beamformers)))
        if not math.isclose(physical_t, report.t, rel_tol=1e-9, abs_tol=1e-12):
            raise RuntimeError(f"physical min SINR {physical_t!r} differs from reported {report.t!r}")
    except Exception as err:
        log(f"{fn}(): trial {trial_index} at P={p_db} dB failed: {type(err).__name__}: {err}")
        return TrialRecord(p_db, trial_index, math.nan, math.nan, 0, 0,
                           1000.0 * (time.perf_counter() - start), False, True, str(err))
    return TrialRecord(p_db, trial_index, report.t, to_db(report.t), report.outer_iters,
                       report.inner_iters, 1000.0 * (time.perf_counter() - start),
                       report.cap_hit, False, '')


def _run_work_item(item):
    return run_trial(*item)


def aggregate(p_db, records):
    """
    Summary of the records of one power point (failed trials excluded). The
    mean and the standard error are taken over the per-trial dB values.

    Returns:
        (SweepPoint): aggregate over the records
    """
    valid = sorted((rec for rec in records if not rec.failed), key=lambda rec: rec.trial)
    if not valid:
        return SweepPoint(p_db, math.nan, math.nan, math.nan, math.nan, math.nan)
    sinr_db = np.array([rec.min_sinr_db for rec in valid])
    stderr = float(np.std(sinr_db, ddof=1) / np.sqrt(len(valid))) if len(valid) > 1 else 0.0
    return SweepPoint(p_db,
                      float(np.mean(sinr_db)),
                      stderr,
                      float(np.mean([rec.outer_iters for rec in valid])),
                      float(np.mean([rec.inner_iters for rec in valid])),
                      float(np.mean([rec.wall_ms for rec in valid])))


def run_sweep(scenario_cfg, p_values_db, solver_cfg=None, workers=None):
    """
    Run 'trials' independent solves at every power point and aggregate them.
    Trial i sees the same channels and initial point at every power point.

    Args:
        scenario_cfg (ScenarioConfig): scenario settings
        p_values_db (list): swept per-BS power P in dB
        solver_cfg (DtConfig): solver settings (defaults if None)
        workers (int): worker processes (None: as many as allowed, see
            tools.get_num_workers)

    Returns:
        (SweepResult): one SweepPoint per power value and all trial records

    Raises:
        ValueError: if the scenario or a power value is invalid
        SweepAbortedError: if more than 1% of the trials fail
    """
    fn = sys._getframe().f_code.co_name

    check_scenario_cfg(scenario_cfg)
    p_values_db = [float(p) for p in p_values_db]
    if not all(math.isfinite(p) for p in p_values_db):
        raise ValueError(f"power values must be finite, got {p_values_db}")

    work = [(scenario_cfg, solver_cfg, p_db, trial)
            for p_db in p_values_db for trial in range(scenario_cfg.trials)]
    workers = get_num_workers(workers)
    log(f"{fn}(): {len(work)} trials ({len(p_values_db)} power points x {scenario_cfg.trials}) "
        f"on {workers} worker(s)")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(_run_work_item, work, chunksize=max(1, len(work) // (4 * workers))))
    else:
        records = [_run_work_item(item) for item in work]

    failures = sum(rec.failed for rec in records)
    if failures > MAX_FAILURE_RATIO * len(records):
        raise SweepAbortedError(f"{failures} of {len(records)} trials failed")

    by_power = {p_db: [] for p_db in p_values_db}
    for rec in records:
        by_power[rec.p_db].append(rec)
    points = [aggregate(p_db, by_power[p_db]) for p_db in p_values_db]
    for point in points:
        log(f"{fn}(): P={point.p_db} dB: mean min SINR {point.mean_min_sinr_db!r} dB "
            f"(stderr {point.stderr_db!r})")
    records.sort(key=lambda rec: (p_values_db.index(rec.p_db), rec.trial))
    return SweepResult(points, records)


def power_grid(pmin_db, pmax_db, pstep_db):
    """
    Power points pmin, pmin + pstep, ... up to pmax (inclusive)

    Raises:
        ValueError: if pstep <= 0 or pmax < pmin
    """
    if not pstep_db > 0:
        raise ValueError(f"pstep-db must be positive, got {pstep_db}")
    if pmax_db < pmin_db:
        raise ValueError(f"pmax-db ({pmax_db}) must not be below pmin-db ({pmin_db})")
    count = int(math.floor((pmax_db - pmin_db) / pstep_db + 1e-9)) + 1
    return [pmin_db + i * pstep_db for i in range(count)]


def write_sweep_csv(result, fh):
    """
    Write the sweep summary (one row per power point) as CSV

    Args:
        result (SweepResult): sweep result
        fh (file): open text file

    Returns:
        None (implicitly)
    """
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(SWEEP_HEADER)
    for point in result.points:
        writer.writerow([format_float(value) for value in point])


def write_records_csv(result, fh):
    """
    Write the raw per-trial records as CSV
    """
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(RECORDS_HEADER)
    for rec in result.records:
        writer.writerow([format_float(rec.p_db), rec.trial, format_float(rec.min_sinr),
                         format_float(rec.min_sinr_db), rec.outer_iters, rec.inner_iters,
                         format_float(rec.wall_ms), int(rec.cap_hit), int(rec.failed)])
