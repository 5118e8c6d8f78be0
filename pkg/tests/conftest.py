import pytest

from bpmac.core import KeyMaterial

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture
def keys():
    return KeyMaterial(bytes.fromhex("000102030405060708090a0b0c0d0e0f"),
                       bytes.fromhex("f0e0d0c0b0a090807060504030201000"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
