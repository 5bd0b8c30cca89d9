# Tests for the problem model of oblique-beam
#
# license: GPLv2
#

# Standard library imports
# (none yet)

# Third party imports (anything installed into the local Python environment)
import numpy as np
import pytest

# Local application imports (anything from oblique-beam)
from beamforming.oblique_manifold import random_point
from beamforming.problem_model import (FIELD_BUDGETS, FIELD_CHANNELS, FIELD_NOISE_POWER, FIELD_TARGETS,
                                       InstanceValidationError, NetworkInstance, NormalizedProblem, denormalize,
                                       is_power_feasible, margin, normalize, physical_sinr_table, sinr_min,
                                       signal_and_interference, sinr_table, worst_user)


def random_instance(L, K, M, seed=0, budgets=None, targets=None, noise=None):
    """Instance with CN(0, 1) channels, shared by several test modules"""
    rng = np.random.default_rng(seed)
    channels = (rng.standard_normal((L, L, K, M)) + 1j * rng.standard_normal((L, L, K, M))) / np.sqrt(2.0)
    if noise is None:
        noise = rng.uniform(0.5, 2.0, size=(L, K))
    if targets is None:
        targets = rng.uniform(0.5, 2.0, size=L)
    if budgets is None:
        budgets = rng.uniform(1.0, 4.0, size=L)
    return NetworkInstance(channels, noise, targets, budgets)


def test_instance_shapes():
    inst = random_instance(2, 3, 4)
    assert (inst.L, inst.K, inst.M) == (2, 3, 4)
    assert inst.channels.shape == (2, 2, 3, 4)
    assert inst.noise_power.shape == (2, 3)


def test_instance_is_read_only_copy():
    channels = np.ones((1, 1, 1, 2), dtype=complex)
    budgets = np.array([2.0])
    inst = NetworkInstance(channels, [[1.0]], [1.0], budgets)

    with pytest.raises(ValueError):
        inst.budgets[0] = 3.0
    with pytest.raises(ValueError):
        inst.channels[0, 0, 0, 0] = 0.0

    # arrays of the caller stay untouched and writable
    budgets[0] = 5.0
    assert inst.budgets[0] == 2.0
    channels[0, 0, 0, 0] = 0.0
    assert inst.channels[0, 0, 0, 0] == 1.0


@pytest.mark.parametrize("field, kwargs", [
    (FIELD_CHANNELS, {'channels': np.ones((2, 3, 1, 2))}),
    (FIELD_CHANNELS, {'channels': np.ones((2, 2, 1))}),
    (FIELD_CHANNELS, {'channels': np.full((2, 2, 1, 2), np.nan)}),
    (FIELD_NOISE_POWER, {'noise_power': [[1.0], [0.0]]}),
    (FIELD_NOISE_POWER, {'noise_power': [[1.0, 1.0]]}),
    (FIELD_TARGETS, {'targets': [1.0, -1.0]}),
    (FIELD_TARGETS, {'targets': [1.0]}),
    (FIELD_BUDGETS, {'budgets': [1.0, np.inf]}),
    (FIELD_BUDGETS, {'budgets': [0.0, 1.0]}),
])
def test_instance_validation(field, kwargs):
    args = {
        'channels': np.ones((2, 2, 1, 2)),
        'noise_power': [[1.0], [1.0]],
        'targets': [1.0, 1.0],
        'budgets': [1.0, 1.0],
    }
    args.update(kwargs)
    with pytest.raises(InstanceValidationError) as excinfo:
        NetworkInstance(**args)
    assert excinfo.value.field == field


def test_normalize_lifts_and_scales():
    inst = random_instance(2, 2, 3, seed=1)
    prob = normalize(inst)

    assert prob.channels.shape == (2, 2, 2, 4)
    assert prob.dim == 4
    assert np.all(prob.channels[..., -1] == 0)
    j, l, k = 1, 0, 1
    expected = np.sqrt(inst.budgets[j] / inst.noise_power[l, k]) * inst.channels[j, l, k]
    assert np.allclose(prob.channels[j, l, k, :3], expected)
    assert np.array_equal(prob.targets, inst.targets)


def test_normalized_sinr_matches_physical_sinr():
    inst = random_instance(3, 2, 2, seed=2)
    prob = normalize(inst)
    W = random_point(inst.M, inst.L, seed=5)

    physical = denormalize(prob, W, inst.budgets)

    assert np.allclose(sinr_table(prob, W), physical_sinr_table(inst, physical.beamformers), rtol=1e-12)
    assert is_power_feasible(physical, inst.budgets)
    # the slack entry absorbs the unused part of the budget
    assert np.allclose(physical.used_power, inst.budgets * (1.0 - np.abs(W[-1]) ** 2))


def test_denormalize_shape_mismatch():
    inst = random_instance(2, 1, 2)
    prob = normalize(inst)
    with pytest.raises(ValueError):
        denormalize(prob, np.ones((2, 2)), inst.budgets)
    with pytest.raises(ValueError):
        denormalize(prob, random_point(2, 2, 0), [1.0])


def test_margin_vanishes_at_own_sinr():
    inst = random_instance(2, 3, 2, seed=3)
    prob = normalize(inst)
    W = random_point(inst.M, inst.L, seed=4)
    t = sinr_min(prob, W)

    value, per_user = margin(prob, W, t)

    assert per_user.shape == (2, 3)
    assert value == pytest.approx(0.0, abs=1e-12 * (1.0 + np.max(np.abs(per_user))))
    # margin is decreasing in t
    assert margin(prob, W, t + 1.0)[0] < value
    assert margin(prob, W, 0.5 * t)[0] > value


def two_cell_problem():
    # h_{1,1,1} = h_{2,1,1} = [1, 0], h_{2,2,1} = [2, 0], h_{1,2,1} = 0
    channels = np.zeros((2, 2, 1, 2), dtype=complex)
    channels[0, 0, 0] = [1.0, 0.0]
    channels[1, 0, 0] = [1.0, 0.0]
    channels[1, 1, 0] = [2.0, 0.0]
    return NormalizedProblem(channels, [1.0, 1.0])


def test_two_cell_sinr():
    prob = two_cell_problem()
    W = np.array([[1.0, 1.0], [0.0, 0.0]], dtype=complex)

    signal, interference = signal_and_interference(prob, W)
    assert np.allclose(signal, [[1.0], [4.0]])
    assert np.allclose(interference, [[1.0], [0.0]])

    # min(1 / (1 + 1), 4 / (0 + 1))
    assert np.allclose(sinr_table(prob, W), [[0.5], [4.0]])
    assert sinr_min(prob, W) == 0.5
    assert worst_user(prob, W) == (0, 0)

    value, per_user = margin(prob, W, 0.5)
    assert np.allclose(per_user, [[0.0], [3.5]])
    assert value == 0.0


def test_worst_user_ties_pick_first():
    channels = np.zeros((1, 1, 3, 1), dtype=complex)
    channels[0, 0, :, 0] = [2.0, 1.0, 1.0]
    inst = NetworkInstance(channels, np.ones((1, 3)), [1.0], [1.0])
    prob = normalize(inst)
    W = np.array([[1.0], [0.0]], dtype=complex)

    assert worst_user(prob, W) == (0, 1)
    assert sinr_min(prob, W) == pytest.approx(1.0)


def test_is_degenerate():
    channels = np.zeros((2, 2, 1, 2), dtype=complex)
    channels[0, 1, 0] = [1.0, 1.0]
    inst = NetworkInstance(channels, np.ones((2, 1)), [1.0, 1.0], [1.0, 1.0])
    assert normalize(inst).is_degenerate()

    channels[1, 1, 0] = [0.0, 1e-3]
    inst = NetworkInstance(channels, np.ones((2, 1)), [1.0, 1.0], [1.0, 1.0])
    assert not normalize(inst).is_degenerate()
