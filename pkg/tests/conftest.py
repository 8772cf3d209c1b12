import pytest

from keyhrv.ingest import KeyEvent

T0 = 1_627_800_000_000


def typed(*pairs, t0=T0):
    """Key events from (symbol, offset_ms) pairs."""
    return [KeyEvent(t0 + off, sym) for sym, off in pairs]


@pytest.fixture
def t0():
    return T0


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
