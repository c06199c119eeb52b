"""Shared pytest hooks: collects acceptance results and prints one line each."""

import pytest

_RESULTS = {}


@pytest.fixture
def acceptance():
    """Callable ``record(number, passed, detail)`` for acceptance criteria."""
    def record(number, passed, detail):
        _RESULTS[number] = (bool(passed), detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        passed, detail = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
