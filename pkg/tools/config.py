# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# license: GPLv2
#

# Standard library imports
import configparser
import sys

# Third party imports (anything installed into the local Python environment)
# (none yet)

# Local application imports (anything from oblique-beam)
from .logging import error

LOGGING = 'logging'
LOG_PATH = 'log_path'


class ConfigValueError(Exception):
    """
    Exception to be raised when a configuration value cannot be interpreted
    """
    pass


def read_config(path='app.cfg'):
    """
    Read the config file. A missing file results in an empty configuration,
    in which case built-in defaults apply everywhere.

    Args:
        path (string): path to the configuration file

    Returns:
        ConfigParser instance containing configuration settings or exit
            if Exception is caught
    """
    fn = sys._getframe().f_code.co_name

    try:
        config = configparser.ConfigParser()
        config.read(path)
    except Exception as err:
        error(f"{fn}(): Unable to read configuration file {path}!\n{err}", rc=2)

    return config


def get_section(cfg, section):
    """
    Returns the section of the configuration or an empty dict if the
    configuration has no such section.
    """
    if cfg is not None and cfg.has_section(section):
        return cfg[section]
    return {}


def _get_value(cfg, section, item, default, convert):
    raw = get_section(cfg, section).get(item)
    if raw is None or raw.strip() == '':
        return default
    try:
        return convert(raw.strip())
    except ValueError as err:
        raise ConfigValueError(f'invalid value "{raw}" for "{item}" in section "{section}": {err}')


def get_float(cfg, section, item, default=None):
    """
    Get a float setting

    Args:
        cfg (ConfigParser): configuration
        section (string): section name
        item (string): setting name
        default (float): value used when the setting is absent or empty

    Returns:
        (float): the setting or the default

    Raises:
        ConfigValueError: if the setting is not a number
    """
    return _get_value(cfg, section, item, default, float)


def get_int(cfg, section, item, default=None):
    """
    Get an integer setting (see get_float)
    """
    return _get_value(cfg, section, item, default, int)


def get_float_list(cfg, section, item, default=None):
    """
    Get a whitespace separated list of floats (see get_float)
    """
    return _get_value(cfg, section, item, default,
                      lambda raw: tuple(float(x) for x in raw.split()))


def get_log_path(cfg):
    """
    Returns the 'log_path' setting of the 'logging' section or None
    """
    return get_section(cfg, LOGGING).get(LOG_PATH) or None
