import numpy as np
import pytest

from esgbo.market_data import ReturnStats

ASSETS = ("Endesa", "Iberdrola", "Repsol")
UTILITY_MEANS = (-0.00051, -0.00022, 0.00036)
UTILITY_ESG = (8.7, 8.97, 7.32)
SPREAD_ESG = (9.0, 5.0, 2.0)


def covariance_from(vols, rho):
    vols = np.asarray(vols, dtype=float)
    cov = rho * np.outer(vols, vols)
    np.fill_diagonal(cov, vols ** 2)
    return cov


@pytest.fixture
def utility_stats():
    return ReturnStats(ASSETS, UTILITY_MEANS, covariance_from([0.0012, 0.0016, 0.0022], 0.4))


def random_simplex(rng, n, size=None):
    return rng.dirichlet(np.ones(n), size=size)


def toy_quadratic(u):
    u = np.asarray(u, dtype=float)
    return 1.0 - float(np.sum((u - 0.5) ** 2))


_CRITERIA = []
_SETUP_TIME = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "setup":
        # fixture work (e.g. the shared protocol run) counts towards the criterion
        _SETUP_TIME[item.nodeid] = rep.duration
    if rep.when == "call" or rep.failed:
        duration = _SETUP_TIME.pop(item.nodeid, 0.0) + (rep.duration if rep.when == "call" else 0.0)
        _CRITERIA.append((marker.args[0], marker.args[1], rep.passed, duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, duration in sorted(_CRITERIA):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status}  {title}  ({duration:.1f}s)")
