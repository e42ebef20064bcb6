import contextlib

import pytest

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion's outcome for the terminal summary."""

    @contextlib.contextmanager
    def record(number, text):
        try:
            yield
        except BaseException as exc:
            _CRITERIA.append((number, False, text, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"))
            raise
        _CRITERIA.append((number, True, text, ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text, why in sorted(_CRITERIA, key=lambda c: c[0]):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {text}"
        if why:
            line += f"  -- {why}"
        terminalreporter.write_line(line)
