# Tests for reading and writing JSON instance files
#
# license: GPLv2
#

# Standard library imports
import json
import os

# Third party imports (anything installed into the local Python environment)
import numpy as np
import pytest

# Local application imports (anything from oblique-beam)
from beamforming.problem_model import InstanceValidationError
from tools.instance_io import instance_from_document, instance_to_document, load_instance, save_instance

# Local tests imports (reusing code from other tests)
from tests.test_problem_model import random_instance


def single_user_document(budget=2.0):
    return {
        "L": 1, "K": 1, "M": 2,
        "channels": [[[[1.0, 0.0], [0.0, 2.0]]]],
        "noise_power": [[0.5]],
        "targets": [1.0],
        "budgets": [budget],
    }


def test_instance_from_document():
    inst = instance_from_document(single_user_document())
    assert (inst.L, inst.K, inst.M) == (1, 1, 2)
    assert np.array_equal(inst.channels[0, 0, 0], np.array([1.0, 2.0j]))
    assert inst.budgets[0] == 2.0


def test_channel_layout():
    inst = random_instance(2, 3, 2, seed=1)
    doc = instance_to_document(inst)

    # channels[j][l*K + k][m] = [re, im] of h~_{j,l,k}[m]
    j, l, k, m = 1, 0, 2, 1
    value = inst.channels[j, l, k, m]
    assert doc["channels"][j][l * 3 + k][m] == [value.real, value.imag]
    assert np.array_equal(instance_from_document(doc).channels, inst.channels)


def test_save_and_load(tmpdir):
    inst = random_instance(2, 2, 3, seed=2)
    path = os.path.join(tmpdir, "instance.json")

    save_instance(inst, path)
    loaded = load_instance(path)

    assert np.array_equal(loaded.channels, inst.channels)
    assert np.array_equal(loaded.noise_power, inst.noise_power)
    assert np.array_equal(loaded.targets, inst.targets)
    assert np.array_equal(loaded.budgets, inst.budgets)


@pytest.mark.parametrize("field, change", [
    ("budgets", {"budgets": [-1.0]}),
    ("noise_power", {"noise_power": [[0.0]]}),
    ("targets", {"targets": [1.0, 1.0]}),
    ("channels", {"channels": [[[[1.0, 0.0]]]]}),
    ("channels", {"channels": "abc"}),
    ("M", {"M": 0}),
    ("K", {"K": 1.5}),
    ("L", {"L": True}),
])
def test_invalid_documents(field, change):
    doc = single_user_document()
    doc.update(change)
    with pytest.raises(InstanceValidationError) as excinfo:
        instance_from_document(doc)
    assert excinfo.value.field == field


def test_missing_field():
    doc = single_user_document()
    del doc["noise_power"]
    with pytest.raises(InstanceValidationError) as excinfo:
        instance_from_document(doc)
    assert excinfo.value.field == "noise_power"

    with pytest.raises(InstanceValidationError) as excinfo:
        instance_from_document([1, 2, 3])
    assert excinfo.value.field == "document"


def test_load_errors(tmpdir):
    with pytest.raises(OSError):
        load_instance(os.path.join(tmpdir, "does_not_exist.json"))

    path = os.path.join(tmpdir, "broken.json")
    with open(path, "w") as fh:
        fh.write("{not json")
    with pytest.raises(InstanceValidationError) as excinfo:
        load_instance(path)
    assert excinfo.value.field == "document"

    path = os.path.join(tmpdir, "negative.json")
    with open(path, "w") as fh:
        json.dump(single_user_document(budget=-1.0), fh)
    with pytest.raises(InstanceValidationError) as excinfo:
        load_instance(path)
    assert "budgets" in str(excinfo.value)
