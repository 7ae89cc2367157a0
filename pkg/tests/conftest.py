import pytest

import braidshadow as bs


@pytest.fixture(scope="session")
def pb3():
    return bs.pb3_subgroup()


@pytest.fixture(scope="session")
def catalog4():
    return bs.catalog_search(4)


# One PASS/FAIL line per acceptance check at the end of the run, in order.
_acceptance_outcomes = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.skipped):
        _acceptance_outcomes[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance")
    for name in sorted(_acceptance_outcomes):
        outcome = _acceptance_outcomes[name]
        tag = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{tag}  {name}")
