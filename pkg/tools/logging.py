# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# license: GPLv2
#

# Standard library imports
import os
import sys

# Third party imports (anything installed into the local Python environment)
from pyghee.utils import log as pyghee_log

# Local application imports (anything from oblique-beam)
# (none yet)

# environment variables are used (rather than module globals) so that the
# settings are inherited by sweep worker processes
LOG_ENV = 'OBLIQUE_BEAM_LOG'
DEBUG_ENV = 'OBLIQUE_BEAM_DEBUG'
LOG = os.path.join(os.getenv('HOME', os.getcwd()), 'oblique-beam.log')


def error(msg, rc=1):
    """
    Print an error and exit

    Args:
        msg (string): error message to be printed
        rc (int): exit code (2 for validation errors, 3 for I/O errors)

    Returns:
        function never returns, but rather exits the program
    """
    sys.stderr.write(msg + "\n")
    sys.exit(rc)


def set_log_file(path):
    """
    Set the log file used by log() when no explicit log file is given

    Args:
        path (string): path to log file, None resets to the default

    Returns:
        None (implicitly)
    """
    if path:
        os.environ[LOG_ENV] = path
    else:
        os.environ.pop(LOG_ENV, None)


def set_debug(enabled):
    """
    Enable or disable messages logged via log_debug()

    Args:
        enabled (bool): whether debug messages are written

    Returns:
        None (implicitly)
    """
    if enabled:
        os.environ[DEBUG_ENV] = '1'
    else:
        os.environ.pop(DEBUG_ENV, None)


def get_log_file():
    """
    Returns the path of the log file currently in use
    """
    return os.getenv(LOG_ENV) or LOG


def log(msg, log_file=None):
    """
    Log message (with timestamp) to log file

    Args:
        msg (string): message to be logged
        log_file (string): path to log file, defaults to get_log_file()

    Returns:
        None (implicitly)
    """
    pyghee_log(msg, log_file=log_file or get_log_file())


def log_debug(msg, log_file=None):
    """
    Log message only if debugging was enabled (see set_debug)
    """
    if os.getenv(DEBUG_ENV):
        log(msg, log_file=log_file)
