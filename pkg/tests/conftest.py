import pytest

ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    """Store one status line per acceptance criterion for the terminal summary."""

    def _record(number: int, title: str, passed: bool, elapsed: float, limit: float) -> None:
        timing = f"{elapsed:.2f}s / limit {limit:g}s"
        status = "PASS" if passed and elapsed < limit else "FAIL"
        ACCEPTANCE[number] = f"criterion {number}: {status}  {title}  ({timing})"

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
