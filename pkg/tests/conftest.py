import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mincut_sensitivity.fixtures import FIXTURES, random_multigraph
from mincut_sensitivity.graph import Multigraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def connected_multigraphs(draw, min_n=2, max_n=8, density=3.0):
    """A random spanning tree plus extra (possibly parallel) edges."""
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(n - 1, max(n - 1, int(density * n))))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_multigraph(random.Random(seed), n, m)


@pytest.fixture(params=sorted(FIXTURES))
def fixture_graph(request) -> Multigraph:
    return FIXTURES[request.param]().graph


def k2() -> Multigraph:
    return Multigraph.from_edges(2, [(0, 1)])


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
