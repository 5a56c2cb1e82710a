import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_KEY] = []


@pytest.fixture
def acceptance(request):
    """Record ``(number, title, passed, detail)`` for the end-of-run summary."""
    lines = request.config.stash[_KEY]

    def record(number: int, title: str, passed: bool, detail: str):
        lines.append((number, title, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(lines):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} | {detail}")
