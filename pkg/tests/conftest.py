import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def verdict():
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str) -> None:
        _ACCEPTANCE[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
