import numpy as np
import pytest

from climarma.ingest import load_bundled_series

_acceptance_results: dict[str, str] = {}


@pytest.fixture(scope="session")
def gistemp():
    return load_bundled_series()


@pytest.fixture(scope="session")
def gistemp_values(gistemp):
    return np.asarray(gistemp.values)


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _acceptance_results[name] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(_acceptance_results):
        outcome = _acceptance_results[name]
        word = {"PASSED": "PASS", "FAILED": "FAIL"}.get(outcome, outcome)
        terminalreporter.write_line(f"{name}: {word}")
