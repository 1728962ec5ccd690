import random

import pytest
from hypothesis import strategies as st

from orientham.core import Digraph, OrientedGraph


@st.composite
def digraphs(draw, min_n=1, max_n=8, oriented=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if oriented:
        pairs = [(u, v) for (u, v) in pairs if u < v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    if oriented:
        flips = draw(st.lists(st.booleans(), min_size=len(chosen), max_size=len(chosen)))
        chosen = [(v, u) if f else (u, v) for (u, v), f in zip(chosen, flips)]
        return OrientedGraph.from_edges(n, chosen)
    return Digraph.from_edges(n, chosen)


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[number])
