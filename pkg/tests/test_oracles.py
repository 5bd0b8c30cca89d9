# Tests for the reference results (closed form and grid search)
#
# license: GPLv2
#

# Standard library imports
# (none yet)

# Third party imports (anything installed into the local Python environment)
import numpy as np
import pytest

# Local application imports (anything from oblique-beam)
from beamforming.dinkelbach_driver import solve_physical
from beamforming.oblique_manifold import is_on_manifold
from beamforming.oracles import (GridSpec, GridTooLargeError, OracleError, grid_search, grid_spec,
                                 single_user_optimum)
from beamforming.problem_model import NetworkInstance, is_power_feasible, normalize, sinr_min

# Local tests imports (reusing code from other tests)
from tests.test_problem_model import random_instance


def orthogonal_two_user_instance():
    channels = np.zeros((1, 1, 2, 2), dtype=complex)
    channels[0, 0, 0] = [1.0, 0.0]
    channels[0, 0, 1] = [0.0, 1.0]
    return NetworkInstance(channels, np.ones((1, 2)), [1.0], [1.0])


def test_single_user_optimum():
    channels = np.array([3.0, 4.0j]).reshape(1, 1, 1, 2)
    inst = NetworkInstance(channels, [[2.0]], [0.5], [3.0])
    # P ||h||^2 / (Gamma sigma^2) = 3 * 25 / (0.5 * 2)
    assert single_user_optimum(inst) == pytest.approx(75.0)

    with pytest.raises(OracleError):
        single_user_optimum(random_instance(1, 2, 2))
    with pytest.raises(OracleError):
        single_user_optimum(random_instance(2, 1, 2))


def test_grid_spec_limits():
    prob = normalize(random_instance(1, 2, 2))
    assert grid_spec(prob, 20) == GridSpec(20, 3)

    with pytest.raises(OracleError):
        grid_spec(prob, 4)
    # 3 parameters per column for M = 2, two columns
    with pytest.raises(GridTooLargeError):
        grid_spec(normalize(random_instance(2, 1, 2)), 10)
    # 1000^3 points
    with pytest.raises(GridTooLargeError):
        grid_spec(prob, 1000)


def test_grid_single_user_matches_closed_form():
    inst = random_instance(1, 1, 1, seed=3)
    result = grid_search(normalize(inst), GridSpec(100, 1))
    assert result.t == pytest.approx(single_user_optimum(inst), rel=1e-3)


def test_grid_orthogonal_users():
    prob = normalize(orthogonal_two_user_instance())

    result = grid_search(prob, GridSpec(101, 3))

    assert result.n_points == 101 ** 3
    assert 0.499 <= result.t <= 0.5 + 1e-12
    assert is_on_manifold(result.point)
    assert sinr_min(prob, result.point) == pytest.approx(result.t)
    # deterministic
    assert grid_search(prob, GridSpec(101, 3)).t == result.t


def test_grid_search_parameter_mismatch():
    prob = normalize(orthogonal_two_user_instance())
    # L = 1, M = 2 has 3 parameters
    with pytest.raises(OracleError):
        grid_search(prob, GridSpec(20, 2))
    with pytest.raises(OracleError):
        grid_search(prob, GridSpec(4, 3))


def test_solver_on_orthogonal_users(retraction_residuals):
    inst = orthogonal_two_user_instance()
    physical, report = solve_physical(inst, 0)
    assert report.t == pytest.approx(0.5, rel=1e-3)
    assert is_power_feasible(physical, inst.budgets)
    assert max(retraction_residuals) < 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("L, K, M, resolution", [(1, 2, 2, 100), (2, 1, 1, 1000)])
def test_solver_reaches_grid(L, K, M, resolution, retraction_residuals):
    for seed in range(3):
        inst = random_instance(L, K, M, seed=500 + seed)
        prob = normalize(inst)
        grid = grid_search(prob, GridSpec(resolution, L * (2 * M - 1)))
        physical, report = solve_physical(inst, seed)
        assert report.t >= grid.t * (1.0 - 0.01)
        assert is_power_feasible(physical, inst.budgets)
    assert max(retraction_residuals) < 1e-12
