"""Suite-wide reporting: one PASS/FAIL line per acceptance criterion."""

from __future__ import annotations

import re

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or report.when != "call":
        return
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    label = f"criterion {int(m.group(1)):02d} ({m.group(2)})"
    _ACCEPTANCE[label] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for label in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{label}: {_ACCEPTANCE[label]}")
