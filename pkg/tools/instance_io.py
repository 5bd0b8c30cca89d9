# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# Reading and writing network instances as JSON:
#
#   {"L": int, "K": int, "M": int,
#    "channels": [j][l*K+k][m] -> [re, im],
#    "noise_power": [l][k], "targets": [l], "budgets": [l]}
#
# license: GPLv2
#

# Standard library imports
import json
import sys

# Third party imports (anything installed into the local Python environment)
import numpy as np

# Local application imports (anything from oblique-beam)
from beamforming.problem_model import (FIELD_BUDGETS, FIELD_CHANNELS, FIELD_K, FIELD_L, FIELD_M,
                                       FIELD_NOISE_POWER, FIELD_TARGETS, InstanceValidationError,
                                       NetworkInstance)
from tools.logging import log


def complex_to_pairs(values):
    """
    Convert a 1-D complex array to a list of [re, im] pairs
    """
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex)]


def _get_dimension(doc, field):
    value = doc.get(field)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise InstanceValidationError(field, f"expected an integer >= 1, got {value!r}")
    return value


def _as_array(value, field, shape):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as err:
        raise InstanceValidationError(field, f"expected numbers: {err}")
    if arr.shape != shape:
        raise InstanceValidationError(field, f"expected shape {shape}, got {arr.shape}")
    return arr


def instance_from_document(doc):
    """
    Create a NetworkInstance from a parsed JSON document

    Args:
        doc (dict): parsed instance document

    Returns:
        (NetworkInstance): validated instance

    Raises:
        InstanceValidationError: naming the offending field
    """
    if not isinstance(doc, dict):
        raise InstanceValidationError('document', "expected a JSON object")
    missing = [field for field in (FIELD_L, FIELD_K, FIELD_M, FIELD_CHANNELS, FIELD_NOISE_POWER,
                                   FIELD_TARGETS, FIELD_BUDGETS) if field not in doc]
    if missing:
        raise InstanceValidationError(missing[0], "missing field")

    L = _get_dimension(doc, FIELD_L)
    K = _get_dimension(doc, FIELD_K)
    M = _get_dimension(doc, FIELD_M)

    pairs = _as_array(doc[FIELD_CHANNELS], FIELD_CHANNELS, (L, L * K, M, 2))
    channels = (pairs[..., 0] + 1j * pairs[..., 1]).reshape(L, L, K, M)

    return NetworkInstance(channels,
                           _as_array(doc[FIELD_NOISE_POWER], FIELD_NOISE_POWER, (L, K)),
                           _as_array(doc[FIELD_TARGETS], FIELD_TARGETS, (L,)),
                           _as_array(doc[FIELD_BUDGETS], FIELD_BUDGETS, (L,)))


def instance_to_document(inst):
    """
    Create the JSON document of an instance (inverse of instance_from_document)
    """
    L, K, M = inst.L, inst.K, inst.M
    flat = inst.channels.reshape(L, L * K, M)
    return {
        FIELD_L: L,
        FIELD_K: K,
        FIELD_M: M,
        FIELD_CHANNELS: [[complex_to_pairs(flat[j, lk]) for lk in range(L * K)] for j in range(L)],
        FIELD_NOISE_POWER: inst.noise_power.tolist(),
        FIELD_TARGETS: inst.targets.tolist(),
        FIELD_BUDGETS: inst.budgets.tolist(),
    }


def load_instance(path):
    """
    Read an instance file

    Args:
        path (string): path to JSON instance file

    Returns:
        (NetworkInstance): validated instance

    Raises:
        OSError: if the file cannot be read
        InstanceValidationError: if the file is not valid JSON or violates
            the instance schema
    """
    fn = sys._getframe().f_code.co_name

    with open(path, 'r') as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise InstanceValidationError('document', f"invalid JSON: {err}")
    inst = instance_from_document(doc)
    log(f"{fn}(): read instance L={inst.L} K={inst.K} M={inst.M} from {path}")
    return inst


def save_instance(inst, path):
    """
    Write an instance file

    Args:
        inst (NetworkInstance): instance to write
        path (string): path to JSON instance file

    Returns:
        None (implicitly)
    """
    fn = sys._getframe().f_code.co_name

    with open(path, 'w') as fh:
        json.dump(instance_to_document(inst), fh)
        fh.write('\n')
    log(f"{fn}(): wrote instance L={inst.L} K={inst.K} M={inst.M} to {path}")
