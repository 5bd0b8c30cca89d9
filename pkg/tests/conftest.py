# Configuration of pytest settings for oblique-beam
#
# license: GPLv2
#

# Standard library imports
# (none yet)

# Third party imports (anything installed into the local Python environment)
import pytest

# Local application imports (anything from oblique-beam)
from beamforming.oblique_manifold import manifold_residual, retract
from tools.logging import DEBUG_ENV, LOG_ENV
from tools import THREADS_ENV


def pytest_configure(config):
    # register custom markers
    config.addinivalue_line(
        "markers", "slow: Monte-Carlo checks that solve many instances"
    )


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    """
    Send log messages to a per-test file and run sweeps in-process
    """
    monkeypatch.setenv(LOG_ENV, str(tmp_path / "oblique-beam.log"))
    monkeypatch.setenv(THREADS_ENV, "1")
    monkeypatch.setenv(DEBUG_ENV, "")
    yield tmp_path


@pytest.fixture
def retraction_residuals(monkeypatch):
    """
    Record the unit-column residual of every point the line search retracts
    to, accepted or not, so tests can check all iterates of a solve.
    """
    residuals = []

    def recording_retract(W, V):
        point = retract(W, V)
        residuals.append(manifold_residual(point))
        return point

    monkeypatch.setattr("beamforming.rcg_solver.retract", recording_retract)
    return residuals
