"""Insertion sequences: removed-and-replayed edges of a real graph, or
fresh random edges on top of it."""

import math
import sys

from lowhigh import settings
from lowhigh.bench.rng import SplitMix64
from lowhigh.errors import SaturatedGraph
from lowhigh.graph import FlowGraph


def _count(percent, m):
    if not 0 < percent < 1:
        raise ValueError(f"percent must lie in (0, 1), got {percent}")
    return math.ceil(percent * m - 1e-9)


def dynamize(G, percent, seed):
    """Remove a uniform sample of ceil(percent * m) edges; return the rest
    as the base graph and the sample, in random order, as insertions."""
    k = _count(percent, G.m)
    edges = G.edge_list()
    order = SplitMix64(seed).shuffle(list(range(len(edges))))
    removed = set(order[:k])
    base = FlowGraph(G.n, G.start, (e for i, e in enumerate(edges) if i not in removed))
    return base, [edges[i] for i in order[:k]]


def random_insertions(G, percent, seed):
    """ceil(percent * m) distinct new edges that are neither loops nor
    already present, fewer if the graph saturates first."""
    k = _count(percent, G.m)
    n = G.n
    taken = {(u, v) for u, v in G.edges() if u != v}
    free = n * (n - 1) - len(taken)
    if free <= 0:
        raise SaturatedGraph(f"no edge can be added to a graph with n={n}, m={G.m}")
    if k > free:
        if settings.DEBUG_MODE:
            print(f"Only {free} of {k} requested insertions exist", file=sys.stderr)
        k = free

    rng = SplitMix64(seed)
    if 2 * k > free:
        pool = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1)
                if u != v and (u, v) not in taken]
        return rng.shuffle(pool)[:k]

    drawn = []
    while len(drawn) < k:
        u = rng.below(n) + 1
        v = rng.below(n) + 1
        if u == v or (u, v) in taken:
            continue
        taken.add((u, v))
        drawn.append((u, v))
    return drawn
