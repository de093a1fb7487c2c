import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ehrelay.scenario import default_scenario  # noqa: E402

ACCEPTANCE_LINES = []


def report(number, title, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def reference():
    """Reference network with L = 2, theta_p = 1e-2, P_t = 20 dB."""
    return default_scenario()


@pytest.fixture
def repo_root():
    return Path(__file__).resolve().parents[1]
