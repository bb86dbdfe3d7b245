import time
import warnings

import pytest

from mmrabi.analysis import dressed_transition_series, nonrenormalized_series
from mmrabi.circuit import REFERENCE_PARAMS

# Lines recorded by the acceptance module, echoed in the terminal summary.
ACCEPTANCE_LINES = []
# Wall time (s) of the expensive session fixtures, for runtime criteria.
FIXTURE_SECONDS = {}


@pytest.fixture(scope="session")
def params():
    return REFERENCE_PARAMS


@pytest.fixture(scope="session")
def params_cj():
    return REFERENCE_PARAMS.replace(cj=5e-15)


@pytest.fixture(scope="session")
def renormalized_series():
    """M = 1..6 sweep at the default parameters and budget (about 20 s)."""
    start = time.perf_counter()
    series = dressed_transition_series(REFERENCE_PARAMS, range(1, 7))
    FIXTURE_SECONDS["renormalized_series"] = time.perf_counter() - start
    return series


@pytest.fixture(scope="session")
def naive_series():
    start = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        series = nonrenormalized_series(REFERENCE_PARAMS, range(1, 7))
    FIXTURE_SECONDS["naive_series"] = time.perf_counter() - start
    return series


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
