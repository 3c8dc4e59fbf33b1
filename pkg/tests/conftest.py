import sys
import itertools

import numpy as np
import pytest

from gfattack.graph import Graph


def complete(n, X=None):
    return Graph.from_edges(n, itertools.combinations(range(n), 2), X=X)


def path(n, X=None):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], X=X)


@pytest.fixture
def k2():
    return complete(2)


@pytest.fixture
def k3():
    return complete(3, X=np.eye(3))


@pytest.fixture
def p3():
    return path(3, X=np.eye(3))


@pytest.fixture
def star():
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)], X=np.eye(4))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
