from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA: list[str] = []


def record(number: int, title: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    CRITERIA.append(f"criterion {number}: {status}  {title}" + (f"  [{detail}]" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


from hypothesis import settings  # noqa: E402

settings.register_profile("exact", deadline=None, derandomize=True)
settings.load_profile("exact")
