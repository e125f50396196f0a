import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, print_blob=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# (criterion number, title, status, detail), filled in by test_acceptance.py
ACCEPTANCE_LINES: list[tuple[int, str, str, str]] = []


@pytest.fixture
def acceptance_record():
    def record(number: int, title: str, ok: bool | None, detail: str = "") -> None:
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        ACCEPTANCE_LINES.append((number, title, status, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, detail in sorted(ACCEPTANCE_LINES):
        line = f"[{status}] criterion {number:>2}: {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
