import pytest

R0 = 0.4350411707
ANCHOR = 5e-7
IDENTITY = 1e-12


@pytest.fixture
def r0():
    return R0


# one line per acceptance criterion, printed after the run
CRITERIA_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    CRITERIA_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(CRITERIA_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
