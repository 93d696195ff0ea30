import numpy as np
import pytest

from chargedbose import dyson, kernels


@pytest.fixture(scope="session")
def I0():
    return kernels.compute_I0().quadrature


@pytest.fixture(scope="session")
def minimizer(I0):
    return dyson.minimize_variational(I0=I0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one summary line per acceptance criterion."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
