import pytest

from tau2pf.cli import seeded_rapidities

# acceptance outcomes, filled by test_acceptance.py and echoed after the run
ACCEPTANCE_LINES = {}


def rap_for(N, L, seed=0, backend="exact", bound=5):
    return seeded_rapidities(seed, bound, N, L, backend)


@pytest.fixture
def make_rap():
    return rap_for


@pytest.fixture
def hand_rap():
    """N=2, L=1 with b=1, d_0=2, d_1=3, a=c=0."""
    from tau2pf import RapiditySet
    return RapiditySet.build(2, 1, [[0, 1, 0, 2], [0, 1, 0, 3]])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
