import numpy as np
import pytest

from cardinal_ot.costs import SeparableCost
from cardinal_ot.measures import make_measure_2d

ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def switching():
    """Horizontal pair feeding a vertical pair through the single point (0, 0)."""
    mu = make_measure_2d([(1, 0), (2, 0)], [0.5, 0.5])
    nu = make_measure_2d([(0, 1), (0, 2)], [0.5, 0.5])
    return mu, nu


@pytest.fixture
def theta_example():
    mu = make_measure_2d([(0, 0), (7, 1)], [0.5, 0.5])
    nu = make_measure_2d([(1, 1), (8, 0)], [0.5, 0.5])
    return mu, nu


@pytest.fixture
def axis_example():
    mu = make_measure_2d([(0, 0), (1, 0)], [0.5, 0.5])
    nu = make_measure_2d([(0, 1), (2, 2)], [0.5, 0.5])
    return mu, nu


@pytest.fixture
def l1():
    return SeparableCost.power(1, 1)


@pytest.fixture
def l2():
    return SeparableCost.power(2, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log(request):
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])
    return lines.append


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
