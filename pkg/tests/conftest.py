import random

import networkx as nx
import pytest
from hypothesis import settings, strategies as st

from netdef import Network, ValueFunction

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SQUARE = ValueFunction.power(2)
CUBE = ValueFunction.power(3)
EXP = ValueFunction.exp()

# acceptance criteria record their verdicts here; printed in the terminal summary
ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        verdict, title, secs = ACCEPTANCE[num]
        terminalreporter.write_line(f"{verdict} criterion {num}: {title} ({secs:.2f} s)")


@st.composite
def networks(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Network.from_edges(n, chosen)


def to_nx(g: Network) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    h.add_edges_from(g.edges)
    return h


def random_connected(rng: random.Random, n: int, extra: float = 0.2) -> Network:
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra:
                edges.add((u, v))
    return Network.from_edges(n, edges)


@pytest.fixture
def square():
    return SQUARE
