import pytest

from distdecomp.ratpoly import RationalFunction, exact, z


@pytest.fixture
def alpha():
    return exact("0.1")


def Q(s):
    return exact(s)


def gd(a="0.1"):
    """Gradient descent -a/(z-1)."""
    return -exact(a) / (z - 1)


__all__ = ["Q", "gd", "RationalFunction", "z"]


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
