"""Test configuration and fixtures for lowhigh tests."""

import os
import random
import shutil
import tempfile

import networkx as nx
import pytest

from lowhigh import settings
from lowhigh.graph import FlowGraph

G1_EDGES = [(1, 2), (2, 3), (3, 4)]
G2_EDGES = [(1, 2), (2, 3), (3, 4), (1, 5), (5, 4)]
G3_EDGES = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)]


@pytest.fixture
def g1():
    """Chain 1 -> 2 -> 3 -> 4."""
    return FlowGraph(4, 1, G1_EDGES)


@pytest.fixture
def g2():
    """Vertex 4 is entered from both 3 (under 2) and 5, so d(4) = 1."""
    return FlowGraph(5, 1, G2_EDGES)


@pytest.fixture
def g3():
    """Bidirected triangle."""
    return FlowGraph(3, 1, G3_EDGES)


def random_flow_graph(seed, n, density, start=1):
    """Seeded digraph with about density * n edges, loops and duplicates allowed."""
    rng = random.Random(seed)
    edges = [(rng.randint(1, n), rng.randint(1, n)) for _ in range(int(density * n))]
    return FlowGraph(n, start, edges)


def random_strongly_connected(seed, n, extra):
    """Hamiltonian cycle over a shuffled order plus `extra` random edges."""
    rng = random.Random(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = [(order[i], order[(i + 1) % n]) for i in range(n)]
    edges += [(rng.randint(1, n), rng.randint(1, n)) for _ in range(extra)]
    return FlowGraph(n, 1, edges)


def is_2vc_brute(G):
    """Strongly connected with at least three vertices, and still so after
    deleting any one vertex."""
    if G.n < 3:
        return False
    graph = nx.DiGraph(G.to_networkx())
    if not nx.is_strongly_connected(graph):
        return False
    for v in G.vertices():
        rest = graph.copy()
        rest.remove_node(v)
        if not nx.is_strongly_connected(rest):
            return False
    return True


def random_2vc(seed, n):
    """Random strongly connected graph grown by n new edges at a time until
    it is 2-vertex-connected."""
    rng = random.Random(seed)
    G = random_strongly_connected(seed, n, 0)
    while not is_2vc_brute(G):
        for _ in range(n):
            u, v = rng.randint(1, n), rng.randint(1, n)
            if u != v and not G.has_edge(u, v):
                G.insert_raw_edge(u, v)
    return G


@pytest.fixture
def make_graph():
    return random_flow_graph


@pytest.fixture(autouse=True)
def restore_settings():
    """Tests may flip the shared flags; put them back afterwards."""
    saved = (settings.DEBUG_MODE, settings.VERIFY_MODE,
             settings.STRONG_DIVERGENCE_LIMIT, settings.BRUTE_FORCE_LIMIT)
    yield
    (settings.DEBUG_MODE, settings.VERIFY_MODE,
     settings.STRONG_DIVERGENCE_LIMIT, settings.BRUTE_FORCE_LIMIT) = saved


@pytest.fixture(scope="session")
def graph_dir():
    """Directory holding G1, G2, G3 and a DIMACS copy of G2 as files."""
    test_dir = tempfile.mkdtemp()
    files = {
        "g1.txt": "4 3\n1 2\n2 3\n3 4\n",
        "g2.txt": "5 5\n1 2\n2 3\n3 4\n1 5\n5 4\n",
        "g3.txt": "3 6\n" + "".join(f"{u} {v}\n" for u, v in G3_EDGES),
        "g2.dimacs": "c G2\np sp 5 5\na 1 2\na 2 3\na 3 4\na 1 5\na 5 4\n",
    }
    for name, text in files.items():
        with open(os.path.join(test_dir, name), "w") as fh:
            fh.write(text)

    yield test_dir

    shutil.rmtree(test_dir)
