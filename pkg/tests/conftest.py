import numpy as np
import pytest

from spectral_ldp.core import WeightedGraph


def random_graph(n, rng, weighted=True):
    w = rng.random((n, n)) if weighted else (rng.random((n, n)) < 0.4).astype(float)
    w = np.triu(w, 1)
    return WeightedGraph(w + w.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def triangle():
    return WeightedGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        ok, detail = results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
