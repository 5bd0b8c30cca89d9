# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# license: GPLv2
#

# Standard library imports
import math
import os
import sys

# Third party imports (anything installed into the local Python environment)
# (none yet)

# Local application imports (anything from oblique-beam)
from tools.logging import log

THREADS_ENV = 'OBLIQUE_BEAM_THREADS'


def get_num_workers(requested=None):
    """
    Determine how many worker processes may be used for independent trials.

    The environment variable OBLIQUE_BEAM_THREADS caps the worker count; if it
    is unset or 0 the number of CPUs is used.

    Args:
        requested (int): number of workers asked for by the caller (None or 0
            means as many as allowed)

    Returns:
        (int): number of workers, at least 1

    Raises:
        ValueError: if OBLIQUE_BEAM_THREADS is not a non-negative integer
    """
    fn = sys._getframe().f_code.co_name

    env_value = os.getenv(THREADS_ENV, '0').strip() or '0'
    try:
        cap = int(env_value)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got '{env_value}'")
    if cap < 0:
        raise ValueError(f"{THREADS_ENV} must not be negative, got {cap}")
    if cap == 0:
        cap = os.cpu_count() or 1

    workers = cap if not requested else min(cap, requested)
    log(f"{fn}(): using {workers} worker(s) ({THREADS_ENV}='{env_value}')")
    return max(1, workers)


def format_float(value):
    """
    Shortest decimal representation that recovers the exact double

    Args:
        value (float): number to format

    Returns:
        (string): repr of the value as a Python float
    """
    return repr(float(value))


def to_db(value):
    """
    Convert a linear power ratio to dB (10 log10), -inf for 0
    """
    if value <= 0.0:
        return -math.inf
    return 10.0 * math.log10(value)


def from_db(value_db):
    """
    Convert a dB value to a linear power ratio
    """
    return 10.0 ** (value_db / 10.0)
