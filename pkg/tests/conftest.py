import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def correlated_study():
    """Correlated ARFIMA family, d1 = d2 = 0.4, T = 5000, window 21, 200 replications."""
    from xspectra.study import Model, StudyGrid, run_study

    grid = StudyGrid(Model.CORRELATED_ARFIMA, T=5000, replications=200, base_seed=2014)
    return run_study(grid, workers=1)


@pytest.fixture(scope="session")
def mixed_study():
    """Mixed-correlated ARFIMA family, d1 = d4 = 0.4, d2 = d3 = 0.2, sigma_23 = rho."""
    from xspectra.study import Model, StudyGrid, run_study

    grid = StudyGrid(Model.MC_ARFIMA, T=5000, replications=200, base_seed=2014)
    return run_study(grid, workers=1)
