"""Low-high orders: the maintained state, its checker, and the local
ordering step run after an insertion.

After an insertion with affected vertices A, the children of z = nca(x, y)
are reordered by a low-high order of a small flat flow graph G_A over z,
the child c of z above A, A itself and two sentinels standing for the
siblings of c before and after it. That order comes from peeling G_A along
two divergent spanning trees. When the candidate trees built from the
search fail their check, or the order they give is rejected, a slower peel
that contracts G_A itself takes over.
"""

import sys
from dataclasses import dataclass, field

from lowhigh import settings
from lowhigh.dominators import DomTree, compute_dominators, is_low_high_order
from lowhigh.errors import InvariantViolation, StuckPeel
from lowhigh.graph import FlowGraph


class LowHighState:
    """Graph, dominator tree, delta (the tree's preorder), mark/low/high
    witnesses and the divergent-tree parents b, r, plus work counters."""

    def __init__(self, graph, dom):
        n = graph.n
        self.graph = graph
        self.dom = dom
        self.mark = [False] * (n + 1)
        self.low = [None] * (n + 1)
        self.high = [None] * (n + 1)
        self.b = [0] * (n + 1)
        self.r = [0] * (n + 1)
        self.nu_total = 0
        self.mu_total = 0
        self.restarts = 0
        self.fallbacks = 0
        self.checks = settings.VERIFY_MODE
        self.last_report = None
        self.last_derived = None

    @classmethod
    def empty(cls, n, start=1):
        return cls(FlowGraph(n, start), DomTree(n, start))

    @property
    def n(self):
        return self.graph.n

    @property
    def start(self):
        return self.graph.start

    @property
    def order_num(self):
        return self.dom.pre

    def order(self):
        return list(self.dom.order)

    def precedes(self, u, v):
        return self.dom.pre[u] < self.dom.pre[v]

    def trees(self):
        reach = self.dom.reachable
        return SpanningTreePair(
            {v: self.b[v] for v in range(1, self.n + 1) if reach[v] and v != self.start},
            {v: self.r[v] for v in range(1, self.n + 1) if reach[v] and v != self.start},
        )

    def adopt(self, other):
        """Take tree, order and witnesses from a freshly built state, and add
        its restart and fallback counts to ours. Search work is not carried."""
        self.dom = other.dom
        self.mark = other.mark
        self.low = other.low
        self.high = other.high
        self.b = other.b
        self.r = other.r
        self.restarts += other.restarts
        self.fallbacks += other.fallbacks

    def find_witnesses(self, v):
        """(low, high) in-edges of v under the current tree and order."""
        dom = self.dom
        dv = dom.parent[v]
        pre = dom.pre
        low = high = None
        for u in self.graph.in_adj[v]:
            if u == v or u == dv or not dom.reachable[u]:
                continue
            if low is None and pre[u] < pre[v]:
                low = (u, v)
            elif high is None and pre[u] > pre[v] and not dom.is_descendant(u, v):
                high = (u, v)
            if low is not None and high is not None:
                break
        return low, high


@dataclass
class SpanningTreePair:
    b_parent: dict
    r_parent: dict


@dataclass
class DerivedAffectedGraph:
    z: int
    c: int
    alpha_star: int
    beta_star: int
    affected: list
    edges: list
    side_of_new_edge: str
    new_edge: tuple
    owner: dict = field(default_factory=dict)  # scanned vertex -> nearest affected ancestor
    raw_edge_count: int = 0

    @property
    def vertices(self):
        return [self.z, self.alpha_star, self.beta_star, self.c] + list(self.affected)

    def edge_set(self):
        return set(self.edges)

    def in_neighbors(self, v):
        return [u for u, w in self.edges if w == v]

    def to_flow_graph(self):
        """(FlowGraph on 1..k with z as 1, list of original ids by index)."""
        ids = [0] + self.vertices
        index = {v: i for i, v in enumerate(ids) if i}
        G = FlowGraph(len(ids) - 1, 1, ((index[u], index[w]) for u, w in self.edges))
        return G, ids

    def is_low_high(self, lam):
        """True iff z followed by lam is a low-high order of G_A under its
        flat dominator tree."""
        G, ids = self.to_flow_graph()
        index = {v: i for i, v in enumerate(ids) if i}
        if sorted(lam) != sorted(self.vertices[1:]):
            return False
        delta = [1] + [index[v] for v in lam]
        flat = DomTree.from_parents(G.n, 1, {i: 1 for i in range(2, G.n + 1)}, order=delta[1:])
        return is_low_high_order(G, flat, delta)


def verify_low_high(G, D, delta):
    return is_low_high_order(G, D, list(delta))


def build_derived_affected(state, z, c, A, scanned, last, new_edge):
    """Build G_A from the pre-insertion tree; the new edge is already stored."""
    dom = state.dom
    G = state.graph
    affected = set(A)
    if c in affected:
        raise InvariantViolation("children of z are unaffected", f"c={c}")
    for v in A:
        if v == c or not dom.is_descendant(v, c):
            raise InvariantViolation("affected vertices lie below one child of z",
                                     f"{v} not below c={c}")
    alpha, beta = G.n + 1, G.n + 2
    x, y = new_edge

    owner = {}
    for q in A:
        stack = [q]
        while stack:
            u = stack.pop()
            owner[u] = q
            stack.extend(ch for ch in dom.children[u] if ch not in affected)

    edges = []
    seen = set()
    raw = 0

    def add(u, w):
        nonlocal raw
        if u == w:
            return
        raw += 1
        if (u, w) not in seen:
            seen.add((u, w))
            edges.append((u, w))

    add(z, alpha)
    add(z, beta)
    if state.mark[c]:
        add(z, c)
    else:
        add(alpha, c)
        add(beta, c)

    for u, q in owner.items():
        for w in G.out_adj[u]:
            if w in affected or w == c:
                add(q, w)

    for w in A:
        pending_new = w == y
        for u in G.in_adj[w]:
            if pending_new and u == x:
                pending_new = False
                continue
            if u in owner or not dom.reachable[u]:
                continue
            if not dom.is_descendant(u, c):
                raise InvariantViolation("parent property", f"edge ({u},{w}) enters from outside D({c})")
            add(c, w)

    if x == z:
        side = "z"
        add(z, y)
    else:
        f = dom.ancestor_child(x, z)
        if dom.pre[c] < dom.pre[f]:
            side = "beta"
            add(beta, y)
        else:
            side = "alpha"
            add(alpha, y)

    return DerivedAffectedGraph(z, c, alpha, beta, list(A), edges, side, tuple(new_edge),
                                owner, raw)


def candidate_trees(ga, last, state):
    """Divergent spanning trees of G_A guessed from the search; unchecked."""
    z, c = ga.z, ga.c
    alpha, beta = ga.alpha_star, ga.beta_star
    affected = set(ga.affected)
    y = ga.new_edge[1]
    dom = state.dom

    b = {alpha: z, beta: z}
    r = {alpha: z, beta: z}
    if state.mark[c]:
        b[c] = r[c] = z
    else:
        b[c] = alpha
        r[c] = beta

    def phi(u):
        while u and u != c and u not in affected:
            u = dom.parent[u]
        return u or c

    rep = {"z": z, "alpha": alpha, "beta": beta}[ga.side_of_new_edge]
    for v in ga.affected:
        if v == y:
            b[v] = rep
        else:
            q = ga.owner.get(last[v][0], c)
            b[v] = q if q != v else c
        q = phi(state.b[v])
        r[v] = q if q != v else c
    return SpanningTreePair(b, r)


def _tree_path(parent, root, v, limit):
    path = [v]
    while v != root:
        v = parent.get(v)
        if v is None or len(path) > limit:
            return None
        path.append(v)
    return path


def verify_flat_divergent(ga, trees):
    """Both maps are spanning trees of G_A on its edges, their root paths meet
    only at the ends, and each vertex has both parents z or three distinct
    vertices among its parents and z."""
    z = ga.z
    edges = ga.edge_set()
    others = ga.vertices[1:]
    limit = len(ga.vertices)
    b, r = trees.b_parent, trees.r_parent
    for tree in (b, r):
        for v in others:
            p = tree.get(v)
            if p is None or (p, v) not in edges:
                return False
    for v in others:
        bp = _tree_path(b, z, v, limit)
        rp = _tree_path(r, z, v, limit)
        if bp is None or rp is None:
            return False
        if set(bp) & set(rp) != {z, v}:
            return False
        if b[v] == r[v]:
            if b[v] != z:
                return False
        elif b[v] == z or r[v] == z:
            return False
    return True


def auxiliary_low_high(ga, trees):
    """Peel G_A along divergent trees B_A, R_A and rebuild the order.

    Returns Lambda over V_A minus z, alpha* first and beta* last."""
    z = ga.z
    alpha, beta = ga.alpha_star, ga.beta_star
    b = dict(trees.b_parent)
    r = dict(trees.r_parent)
    alive = set(ga.vertices[1:])
    b_kids = {v: set() for v in ga.vertices}
    r_kids = {v: set() for v in ga.vertices}
    for v in alive:
        b_kids[b[v]].add(v)
        r_kids[r[v]].add(v)

    peeled = []
    while len(alive) > 2:
        chosen = None
        for v in sorted(alive):
            if v in (alpha, beta):
                continue
            if len({b[v], r[v]}) > len(b_kids[v]) + len(r_kids[v]):
                chosen = v
                break
        if chosen is None:
            raise StuckPeel(f"no peelable vertex among {sorted(alive)}")
        v = chosen
        alive.discard(v)
        b_kids[b[v]].discard(v)
        r_kids[r[v]].discard(v)
        if (b[v] == z) != (r[v] == z):
            raise StuckPeel(f"vertex {v} has exactly one tree parent at z")
        spliced = None
        if b_kids[v]:
            (w,) = b_kids[v]
            b[w] = b[v]
            b_kids[b[v]].add(w)
            b_kids[v].clear()
            spliced = "b"
        elif r_kids[v]:
            (w,) = r_kids[v]
            r[w] = r[v]
            r_kids[r[v]].add(w)
            r_kids[v].clear()
            spliced = "r"
        peeled.append((v, b[v], r[v], spliced))

    # next to the parent v handed its child to, on the side of v's other parent
    lam = [alpha, beta]
    for v, bv, rv, spliced in reversed(peeled):
        if bv == z:
            lam.insert(1, v)
            continue
        anchor, other = (rv, bv) if spliced == "r" else (bv, rv)
        i = lam.index(anchor)
        if lam.index(other) < i:
            lam.insert(i, v)
        else:
            lam.insert(i + 1, v)
    return lam


def _is_flat(vertices, edges, root):
    ids = [0, root] + [v for v in vertices if v != root]
    index = {v: i for i, v in enumerate(ids) if i}
    G = FlowGraph(len(ids) - 1, 1,
                  ((index[u], index[w]) for u, w in edges if u in index and w in index))
    D = compute_dominators(G)
    return all(D.reachable[i] for i in range(1, G.n + 1)) and D.is_flat()


class _PeelGraph:
    """Mutable copy of G_A as in/out neighbor sets, without loops or edges
    into z."""

    def __init__(self, ga):
        self.z = ga.z
        self.ins = {v: set() for v in ga.vertices}
        self.outs = {v: set() for v in ga.vertices}
        for u, w in ga.edges:
            if u == w or w == self.z:
                continue
            self.ins[w].add(u)
            self.outs[u].add(w)

    def edges(self):
        return [(u, w) for w, sources in self.ins.items() for u in sources]

    def is_flat(self):
        return _is_flat(list(self.ins), self.edges(), self.z)

    def drop(self, u, w):
        self.ins[w].discard(u)
        self.outs[u].discard(w)

    def add(self, u, w):
        self.ins[w].add(u)
        self.outs[u].add(w)

    def trim(self, w):
        """Cut the in-edges of w down to (z, w) alone, or to two, keeping
        the graph flat."""
        if self.z in self.ins[w]:
            for u in list(self.ins[w] - {self.z}):
                self.drop(u, w)
            return
        for u in sorted(self.ins[w]):
            if len(self.ins[w]) <= 2:
                break
            self.drop(u, w)
            if not self.is_flat():
                self.add(u, w)

    def contract(self, v):
        """Delete v; its out-neighbor w, if any, inherits v's in-neighbors."""
        sources = self.ins.pop(v)
        targets = self.outs.pop(v)
        for u in sources:
            self.outs[u].discard(v)
        w = next(iter(targets), None)
        if w is not None:
            self.ins[w].discard(v)
            for u in sources:
                if u != w:
                    self.add(u, w)
        return sources, w


def _fits(pos, i, v, sources, w, w_sources, z):
    """Placing v at index i gives v, and w if given, an in-neighbor on each side."""
    if z not in sources:
        if not any(pos[u] < i for u in sources) or not any(pos[u] >= i for u in sources):
            return False
    if w is None or z in w_sources:
        return True
    pw = pos[w]
    return {i <= pw if u == v else pos[u] < pw for u in w_sources} == {True, False}


def greedy_peel_low_high(ga):
    """Order G_A without trees.

    The graph is first cut to in-degree two (or a lone edge from z) per
    vertex while staying flat. Then a vertex with fewer out- than in-edges
    is repeatedly contracted into its out-neighbor, and the order is rebuilt
    by putting each vertex back at the first place where it and that
    out-neighbor both have an in-neighbor on each side."""
    z = ga.z
    alpha, beta = ga.alpha_star, ga.beta_star
    H = _PeelGraph(ga)
    if not H.is_flat():
        raise StuckPeel(f"derived graph under z={z} is not flat, A={ga.affected}")
    for w in sorted(H.ins):
        if w != z:
            H.trim(w)

    peeled = []
    while len(H.ins) > 3:
        v = next((v for v in sorted(H.ins)
                  if v not in (z, alpha, beta) and len(H.outs[v]) < len(H.ins[v])), None)
        if v is None:
            raise StuckPeel(f"greedy peel found no candidate among {sorted(H.ins)}")
        w = next(iter(H.outs[v]), None)
        w_sources = set(H.ins[w]) if w is not None else None
        sources, w = H.contract(v)
        peeled.append((v, sources, w, w_sources))
        if w is not None:
            H.trim(w)

    lam = [alpha, beta]
    for v, sources, w, w_sources in reversed(peeled):
        pos = {u: i for i, u in enumerate(lam)}
        i = next((i for i in range(1, len(lam))
                  if _fits(pos, i, v, sources, w, w_sources, z)), None)
        if i is None:
            raise StuckPeel(f"no place for {v} in {lam}")
        lam.insert(i, v)
    return lam


def derived_low_high(state, z, c, A, scanned, last, new_edge):
    """New children order of z: an augmentation of the old one that places
    A around c by a low-high order of G_A."""
    ga = build_derived_affected(state, z, c, A, scanned, last, new_edge)
    state.last_derived = ga
    trees = candidate_trees(ga, last, state)

    x, y = new_edge
    marked = set()
    if x == z:
        marked.add(y)
    if state.mark[c]:
        marked.add(c)
    for v in marked:
        trees.b_parent[v] = z
        trees.r_parent[v] = z

    lam = None
    if verify_flat_divergent(ga, trees):
        try:
            lam = auxiliary_low_high(ga, trees)
        except StuckPeel as e:
            if settings.DEBUG_MODE:
                print(f"Auxiliary peel stuck after tree check: {e}", file=sys.stderr)
        if lam is not None and not ga.is_low_high(lam):
            if settings.DEBUG_MODE:
                print(f"Auxiliary order {lam} rejected for insertion {new_edge}",
                      file=sys.stderr)
            lam = None
    elif settings.DEBUG_MODE:
        print(f"Candidate trees rejected for insertion {new_edge}, |A|={len(A)}",
              file=sys.stderr)
    if lam is None:
        state.fallbacks += 1
        lam = greedy_peel_low_high(ga)
        if state.checks and not ga.is_low_high(lam):
            raise InvariantViolation("fallback order is low-high on the derived graph",
                                     f"{lam}")

    old = state.dom.children[z]
    i = old.index(c)
    return old[:i] + lam[1:-1] + old[i + 1:]
