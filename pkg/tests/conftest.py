import pytest
from hypothesis import HealthCheck, settings

from entanglement_atlas.catalog import entry_by_id, load_catalog
from entanglement_atlas.gl2 import ResidueMatrix, generate_group

settings.register_profile(
    "atlas", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much]
)
settings.load_profile("atlas")


def group(n, *mats):
    return generate_group([ResidueMatrix.of(n, m) for m in mats], n)


# Example groups, transcribed from the printed generators.
MAXGROUPS = {
    1: [(5, 1, 4, 3), (4, 1, 1, 0)],
    2: [(4, 1, 5, 3), (2, 3, 1, 4)],
    3: [(2, 5, 1, 3), (4, 3, 5, 2)],
    4: [(2, 5, 1, 3), (1, 1, 0, 5)],
}
NABG = {
    1: [(2, 5, 3, 2), (1, 3, 3, 2)],
    2: [(5, 5, 0, 5), (2, 5, 3, 2), (2, 1, 3, 1)],
}
NABG_JOINT = {
    1: [(1, 2, 0, 1), (1, 0, 0, 5), (4, 3, 3, 1)],
    2: [(1, 2, 0, 1), (5, 0, 0, 1), (1, 3, 3, 4)],
}
NABG_JOINT_MOD3 = {1: [(1, 0, 0, 2), (1, 1, 0, 1)], 2: [(2, 0, 0, 1), (1, 1, 0, 1)]}
CONSTELLATION = {
    1: [(6, 5, 7, 1), (7, 0, 9, 9), (4, 5, 5, 4)],
    2: [(1, 5, 1, 6), (1, 0, 0, 7), (4, 5, 5, 4)],
    3: [(1, 5, 1, 6), (1, 0, 5, 3), (4, 5, 5, 4)],
    4: [(6, 5, 7, 1), (8, 5, 7, 6), (9, 5, 0, 9)],
}
LEVEL14_SIEGEL = [(10, 7, 5, 11), (2, 7, 3, 3), (5, 7, 9, 12)]


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def maxgroups():
    return {i: group(6, *g) for i, g in MAXGROUPS.items()}


@pytest.fixture(scope="session")
def nabg():
    return {i: group(6, *g) for i, g in NABG.items()}


@pytest.fixture(scope="session")
def constellation():
    return {i: group(10, *g) for i, g in CONSTELLATION.items()}


@pytest.fixture(scope="session")
def level14_siegel_group():
    return group(14, *LEVEL14_SIEGEL)


@pytest.fixture(scope="session")
def g_s(catalog):
    return entry_by_id(catalog, "G_s").group()


@pytest.fixture(scope="session")
def g_n(catalog):
    return entry_by_id(catalog, "G_n").group()


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
