import pytest

from lyndonrf.words import Word


@pytest.fixture
def W():
    """Parse a letter string into a Word; ``W("aab")`` or ``W("abc", 3)``."""
    return Word.parse


def pytest_terminal_summary(terminalreporter):
    reports = [r for key in ("passed", "failed") for r in terminalreporter.stats.get(key, [])
               if r.when == "call" and "test_acceptance" in r.nodeid]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: r.nodeid):
        props = dict(r.user_properties)
        status = "PASS" if r.passed else "FAIL"
        terminalreporter.write_line(f"{status}  {props.get('criterion', r.nodeid)}: {props.get('detail', '')}")
