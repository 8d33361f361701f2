import numpy as np
import pytest

from markovcesaro.graph import parse_graph

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def loop_pair_graph():
    """Two loops at u, one arc u->v, three loops at v: 3^n - 2^n paths u->v."""
    return parse_graph(
        """
        alphabet a b c
        vertex u
        vertex v
        edge u u a
        edge u u b
        edge u v c
        edge v v a
        edge v v b
        edge v v c
        """
    )


@pytest.fixture
def chain_loops_graph():
    """Loop at u, arc u->v, loop at v: n paths of length n from u to v."""
    return parse_graph("alphabet a\nvertex u\nvertex v\nedge u u a\nedge u v a\nedge v v a\n")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
