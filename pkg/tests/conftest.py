import pytest

from helpers import ACCEPTANCE
from slcs import corpus


@pytest.fixture(scope="session")
def fx():
    """All corpus models by name."""
    return {name: corpus.load(name) for name in corpus.MODELS}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
