"""Flow graph storage, parsing and serialization.

Vertices are dense 1-based ids; 0 is the null vertex. Parallel edges and
self-loops are stored as given: callers that care deduplicate.
"""

import sys

import networkx as nx

from lowhigh import settings
from lowhigh.errors import IdOutOfRange, ParseError


class FlowGraph:
    """Directed multigraph with a start vertex and O(1) edge append."""

    def __init__(self, n, start=1, edges=()):
        if n < 1:
            raise IdOutOfRange(start, n)
        if not 1 <= start <= n:
            raise IdOutOfRange(start, n)
        self.n = n
        self.start = start
        self.out_adj = [[] for _ in range(n + 1)]
        self.in_adj = [[] for _ in range(n + 1)]
        self._edges = []
        for u, v in edges:
            self.insert_raw_edge(u, v)

    @property
    def m(self):
        return len(self._edges)

    def check_id(self, v):
        if not isinstance(v, int) or not 1 <= v <= self.n:
            raise IdOutOfRange(v, self.n)

    def insert_raw_edge(self, u, v):
        self.check_id(u)
        self.check_id(v)
        self.out_adj[u].append(v)
        self.in_adj[v].append(u)
        self._edges.append((u, v))

    def edges(self):
        """Edges in insertion order."""
        return iter(self._edges)

    def edge_list(self):
        return list(self._edges)

    def has_edge(self, u, v):
        # scan the shorter side
        if len(self.out_adj[u]) <= len(self.in_adj[v]):
            return v in self.out_adj[u]
        return u in self.in_adj[v]

    def vertices(self):
        return range(1, self.n + 1)

    def copy(self):
        return FlowGraph(self.n, self.start, self._edges)

    def reverse(self):
        return FlowGraph(self.n, self.start, ((v, u) for u, v in self._edges))

    def subgraph(self, keep):
        """Same n and start, only the edges (u, v) with keep(u, v) true."""
        return FlowGraph(self.n, self.start, ((u, v) for u, v in self._edges if keep(u, v)))

    def without_vertex(self, v):
        """Every edge touching v removed; v stays as an isolated id."""
        return self.subgraph(lambda a, b: a != v and b != v)

    def with_start(self, start):
        return FlowGraph(self.n, start, self._edges)

    def reachable_from(self, root=None, skip=None):
        """Boolean list over 0..n of vertices reachable from root avoiding skip."""
        root = self.start if root is None else root
        seen = [False] * (self.n + 1)
        if root == skip:
            return seen
        seen[root] = True
        stack = [root]
        while stack:
            v = stack.pop()
            for w in self.out_adj[v]:
                if not seen[w] and w != skip:
                    seen[w] = True
                    stack.append(w)
        return seen

    def edge_multiset(self):
        counts = {}
        for e in self._edges:
            counts[e] = counts.get(e, 0) + 1
        return counts

    def serialize(self):
        lines = [f"{self.n} {self.m}"]
        if self.start != 1:
            lines.append(f"s {self.start}")
        lines.extend(f"{u} {v}" for u, v in self._edges)
        return "\n".join(lines) + "\n"

    def to_networkx(self):
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices())
        graph.add_edges_from(self._edges)
        return graph

    def __repr__(self):
        return f"FlowGraph(n={self.n}, m={self.m}, start={self.start})"


def insert_raw_edge(G, u, v):
    G.insert_raw_edge(u, v)


def reverse(G):
    return G.reverse()


def _significant_lines(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


def _parse_int(token, lineno):
    try:
        return int(token)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {token!r}")


def _build(n, start, edges, lineno):
    if n < 1:
        raise ParseError(lineno, f"vertex count must be positive, got {n}")
    if not 1 <= start <= n:
        raise IdOutOfRange(start, n)
    G = FlowGraph(n, start)
    for u, v in edges:
        G.insert_raw_edge(u, v)
    return G


def _load_edgelist(text):
    header = None
    start = 1
    edges = []
    last_lineno = 0
    for lineno, fields in _significant_lines(text):
        last_lineno = lineno
        if header is None:
            if len(fields) != 2:
                raise ParseError(lineno, "header must be 'n m'")
            header = (_parse_int(fields[0], lineno), _parse_int(fields[1], lineno))
            continue
        if fields[0] == "s":
            if edges:
                raise ParseError(lineno, "start line must precede the edges")
            if len(fields) != 2:
                raise ParseError(lineno, "start line must be 's <id>'")
            start = _parse_int(fields[1], lineno)
            continue
        if len(fields) != 2:
            raise ParseError(lineno, "edge line must be 'u v'")
        edges.append((_parse_int(fields[0], lineno), _parse_int(fields[1], lineno)))
    if header is None:
        raise ParseError(last_lineno, "missing 'n m' header")
    n, m = header
    if m != len(edges):
        raise ParseError(last_lineno, f"header declares {m} edges, found {len(edges)}")
    return _build(n, start, edges, last_lineno)


def _load_dimacs(text):
    header = None
    start = 1
    edges = []
    last_lineno = 0
    for lineno, fields in _significant_lines(text):
        last_lineno = lineno
        tag = fields[0]
        if tag == "c":
            continue
        if tag == "p":
            if len(fields) != 4:
                raise ParseError(lineno, "header must be 'p <name> n m'")
            header = (_parse_int(fields[2], lineno), _parse_int(fields[3], lineno))
        elif tag in ("a", "e"):
            if header is None:
                raise ParseError(lineno, "arc before 'p' header")
            if len(fields) < 3:
                raise ParseError(lineno, f"'{tag}' line must be '{tag} u v'")
            edges.append((_parse_int(fields[1], lineno), _parse_int(fields[2], lineno)))
        elif tag == "s":
            if len(fields) != 2:
                raise ParseError(lineno, "start line must be 's <id>'")
            start = _parse_int(fields[1], lineno)
        else:
            raise ParseError(lineno, f"unknown line type {tag!r}")
    if header is None:
        raise ParseError(last_lineno, "missing 'p' header")
    n, m = header
    if m != len(edges) and settings.DEBUG_MODE:
        print(f"DIMACS header declares {m} arcs, found {len(edges)}", file=sys.stderr)
    return _build(n, start, edges, last_lineno)


def load_graph(text, format="edgelist"):
    """Parse an edgelist or DIMACS graph from text or bytes."""
    if format == "edgelist":
        return _load_edgelist(text)
    if format == "dimacs":
        return _load_dimacs(text)
    raise ValueError(f"unknown graph format {format!r}")


def detect_format(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    for _, fields in _significant_lines(text):
        if fields[0] in ("p", "c"):
            return "dimacs"
        return "edgelist"
    return "edgelist"


def read_graph(path):
    with open(path, "rb") as fh:
        data = fh.read()
    return load_graph(data, detect_format(data))


def write_graph(G, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(G.serialize())
