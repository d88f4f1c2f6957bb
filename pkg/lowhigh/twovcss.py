"""Sparse 2-vertex-connected spanning subgraphs from low-high orders.

A digraph is 2-vertex-connected when it has at least three vertices and
stays strongly connected after deleting any one vertex. The subgraph is
a strongly connected spanning subgraph of G minus a start vertex s, plus
at most one extra edge entering each vertex per direction, chosen so a
low-high order of G remains one of the subgraph.
"""

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from lowhigh.dominators import compute_dominators
from lowhigh.errors import InvariantViolation, Not2VC, NotStronglyConnected
from lowhigh.graph import FlowGraph
from lowhigh.incremental import initialize


@dataclass
class SubgraphResult:
    edges: set
    stats: dict = field(default_factory=dict)

    @property
    def edge_count(self):
        return len(self.edges)

    def as_graph(self, G):
        return FlowGraph(G.n, G.start, sorted(self.edges))


def _flat_and_spanning(G):
    D = compute_dominators(G)
    return all(D.reachable[v] for v in G.vertices()) and D.is_flat()


def is_2vc(G):
    if G.n < 3:
        return False
    G = G.with_start(1)
    if not _flat_and_spanning(G) or not _flat_and_spanning(G.reverse()):
        return False
    graph = nx.DiGraph(G.to_networkx())
    graph.remove_node(1)
    return nx.is_strongly_connected(graph)


def _bfs_tree(adj, root, exclude, n, flip):
    seen = [False] * (n + 1)
    seen[root] = True
    edges = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w == exclude or seen[w]:
                continue
            seen[w] = True
            edges.append((w, v) if flip else (v, w))
            queue.append(w)
    return seen, edges


def scss_2approx(G, exclude=None):
    """Out-tree plus in-tree from the lowest remaining id: a strongly
    connected spanning subgraph with at most 2(k - 1) edges."""
    vertices = [v for v in G.vertices() if v != exclude]
    if not vertices:
        return set()
    root = vertices[0]
    out_seen, out_edges = _bfs_tree(G.out_adj, root, exclude, G.n, flip=False)
    in_seen, in_edges = _bfs_tree(G.in_adj, root, exclude, G.n, flip=True)
    for v in vertices:
        if not (out_seen[v] and in_seen[v]):
            raise NotStronglyConnected(f"vertex {v} is not strongly connected to {root}")
    return set(out_edges) | set(in_edges)


def _witness_pass(H, kept, s):
    """Add to `kept` (edges of H) one edge per vertex so each v != s gets
    an edge from s or edges from both sides of v in a low-high order of H."""
    state = initialize(H)
    pre = state.dom.pre
    added = 0
    for v in H.vertices():
        if v == s:
            continue
        sources = {u for u in H.in_adj[v] if (u, v) in kept}
        if s in sources:
            continue
        has_low = any(pre[u] < pre[v] for u in sources)
        has_high = any(pre[u] > pre[v] for u in sources)
        if has_low and has_high:
            continue
        if not has_low:
            pick = min((u for u in H.in_adj[v] if u != v and pre[u] < pre[v]), default=None)
        else:
            pick = min((w for w in H.in_adj[v] if w != v and (pre[w] > pre[v] or w == s)),
                       default=None)
        if pick is None:
            raise InvariantViolation("order is low-high on the input", f"v={v}")
        kept.add((pick, v))
        added += 1
    return added


def lh_z(G):
    if not is_2vc(G):
        raise Not2VC("input graph is not 2-vertex-connected")
    s = 1
    G = G.with_start(s)
    edges = scss_2approx(G, exclude=s)
    stats = {"scss": len(edges)}
    stats["forward"] = _witness_pass(G, edges, s)
    reverse = G.reverse()
    flipped = {(v, u) for u, v in edges}
    stats["reverse"] = _witness_pass(reverse, flipped, s)
    edges = {(v, u) for u, v in flipped}
    return SubgraphResult(edges, stats)
