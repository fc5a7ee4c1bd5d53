import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from coarsecyl.graph import FineGraph

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def connected_graphs(draw, min_n=2, max_n=9, max_extra=6):
    """Random spanning tree plus a few extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        edges.add((j, i))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in edges]
    if pairs:
        extra = draw(st.lists(st.sampled_from(pairs), max_size=max_extra, unique=True))
        edges |= set(extra)
    return FineGraph(range(n), sorted(edges))


@st.composite
def trees(draw, min_n=2, max_n=10):
    n = draw(st.integers(min_n, max_n))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    return FineGraph(range(n), edges)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[k])
