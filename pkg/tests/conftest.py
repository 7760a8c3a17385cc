import pytest

from gessel import acceptance

_RESULTS = {}


@pytest.fixture(scope="session")
def criterion_results():
    """Acceptance results by number, filled lazily and shared with the summary hook."""
    return _RESULTS


def run_and_record(n):
    if n not in _RESULTS:
        _RESULTS[n] = acceptance.run_criterion(n, seed=acceptance.default_seed())
    return _RESULTS[n]


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[n].summary())
