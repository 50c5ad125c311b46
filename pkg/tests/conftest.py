import pytest

from caresim.model.engine import HAVE_COMPILED
from caresim.scenario import Scenario, run_scenario, run_sweep

KERNELS = ["python"] + (["compiled"] if HAVE_COMPILED else [])


@pytest.fixture(scope="session")
def baseline():
    """Default scenario, 100 replications at multiplier 1.0."""
    return run_scenario(Scenario())


@pytest.fixture(scope="session")
def sweep():
    return run_sweep(Scenario())
