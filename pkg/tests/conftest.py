import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spbw import sagbi  # noqa: E402

# every reduction run by the suite is replayed and checked for strict descent
sagbi.VERIFY_TRACES = True

CRITERIA: dict[int, tuple[bool, str]] = {}


def record(num: int, ok: bool, detail: str = "") -> None:
    CRITERIA[num] = (ok, detail)
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        ok, detail = CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    verified = sagbi.TRACE_STATS["verified"]
    terminalreporter.write_line(f"reduction traces replayed and verified: {verified}")
