import pytest

from balancing.bounds import BoundConstants
from balancing.curve import BALANCING_CURVE, BALANCING_GENERATORS, least_eigenvalue, pairing_matrix
from balancing.elliptic_log import LinearFormContext


@pytest.fixture(scope="session")
def E():
    return BALANCING_CURVE


@pytest.fixture(scope="session")
def gens():
    return BALANCING_GENERATORS


@pytest.fixture(scope="session")
def ctx120(E, gens):
    return LinearFormContext.build(E, gens, precision=120)


@pytest.fixture(scope="session")
def ctx450(E, gens):
    return LinearFormContext.build(E, gens, precision=450)


@pytest.fixture(scope="session")
def heights(E, gens):
    H = pairing_matrix(E, gens, 120)
    return H, least_eigenvalue(H, 120)


@pytest.fixture(scope="session")
def constants(heights):
    return {conv: BoundConstants(c1=heights[1], slope_convention=conv)
            for conv in ("published", "consistent")}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
