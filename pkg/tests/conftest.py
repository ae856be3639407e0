import pytest

_LINES: list[str] = []


class CriterionLog:
    def __init__(self, number: int):
        self.number = number

    def report(self, ok: bool, detail: str = "") -> bool:
        line = f"criterion {self.number:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        _LINES.append(line)
        print(line)
        return ok


@pytest.fixture
def criterion():
    return CriterionLog


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
