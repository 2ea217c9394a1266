import numpy as np
import pytest

from mintykit.operator_graph import OperatorGraph


def graph_1d(pairs, label=None):
    """Single-valued 1-D graph from (x, x*) tuples."""
    return OperatorGraph.single_valued([[x] for x, _ in pairs],
                                       [[d] for _, d in pairs], label=label)


@pytest.fixture
def identity01():
    return graph_1d([(0, 0), (1, 1)], label="identity01")


@pytest.fixture
def witness_graph():
    return graph_1d([(0, 0), (1, -1)], label="witness")


@pytest.fixture
def cubic3():
    return graph_1d([(-1, 3), (0, 0), (1, 3)], label="cubic3")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
