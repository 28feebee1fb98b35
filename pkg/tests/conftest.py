"""Shared fixtures and the acceptance-criterion summary table."""

import pytest

_CRITERIA = []


def record_criterion(number: str, passed: bool, detail: str = "") -> None:
    _CRITERIA.append((number, passed, detail))


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, passed, detail in sorted(_CRITERIA, key=lambda r: r[0]):
        status = "PASS" if passed else "FAIL"
        tr.write_line(f"[{status}] criterion {number}: {detail}")
