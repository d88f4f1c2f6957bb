"""Dominator trees: static computation, oracles, ancestor queries and the
certificate checker.

The tree keeps ordered children lists; its preorder numbering `pre` is the
order the rest of the package treats as delta, so reordering a children
list and renumbering the subtree is how an order gets installed.
"""

import networkx as nx

from lowhigh.errors import NoChildren, Unreachable
from lowhigh.graph import FlowGraph


class DomTree:
    """Parent, depth, ordered children and pre/post numbers of a tree rooted
    at the start vertex. Unreachable vertices have parent 0 and pre -1."""

    def __init__(self, n, root):
        self.n = n
        self.root = root
        self.parent = [0] * (n + 1)
        self.depth = [-1] * (n + 1)
        self.children = [[] for _ in range(n + 1)]
        self.pre = [-1] * (n + 1)
        self.post = [-1] * (n + 1)
        self.size = [0] * (n + 1)
        self.reachable = [False] * (n + 1)
        self.reachable[root] = True
        self.depth[root] = 0
        self.order = [root]
        self.pre[root] = 0
        self.post[root] = 0
        self.size[root] = 1

    @classmethod
    def from_parents(cls, n, root, parent, order=None):
        """Build from a {v: parent} map. Children are listed in `order` when
        given, otherwise by id. Vertices not connected to root by parent links
        are left unreachable."""
        tree = cls(n, root)
        sequence = order if order is not None else sorted(parent)
        for v in sequence:
            p = parent.get(v, 0)
            if v == root or not p:
                continue
            tree.parent[v] = p
            tree.children[p].append(v)
        tree._mark_reachable()
        tree.renumber()
        return tree

    def _mark_reachable(self):
        self.reachable = [False] * (self.n + 1)
        self.reachable[self.root] = True
        stack = [self.root]
        while stack:
            v = stack.pop()
            for c in self.children[v]:
                if not self.reachable[c]:
                    self.reachable[c] = True
                    stack.append(c)
        for v in range(1, self.n + 1):
            if not self.reachable[v]:
                self.parent[v] = 0
                self.children[v] = []
        for v in range(1, self.n + 1):
            self.children[v] = [c for c in self.children[v] if self.reachable[c]]

    def copy(self):
        other = DomTree.__new__(DomTree)
        other.n = self.n
        other.root = self.root
        other.parent = list(self.parent)
        other.depth = list(self.depth)
        other.children = [list(c) for c in self.children]
        other.pre = list(self.pre)
        other.post = list(self.post)
        other.size = list(self.size)
        other.reachable = list(self.reachable)
        other.order = list(self.order)
        return other

    def renumber(self, root=None):
        """Recompute pre, post, size, depth and order below root.

        A partial renumber reuses root's existing number ranges, so it is
        only valid when the subtree kept its vertex set."""
        full = root is None or root == self.root
        if full:
            root = self.root
            count = sum(self.reachable)
            self.order = [0] * count
            self.pre = [-1] * (self.n + 1)
            self.post = [-1] * (self.n + 1)
            next_pre = 0
            next_post = 0
        else:
            next_pre = self.pre[root]
            next_post = self.post[root] - self.size[root] + 1
        self.pre[root] = next_pre
        self.order[next_pre] = root
        next_pre += 1
        stack = [(root, iter(self.children[root]))]
        while stack:
            v, it = stack[-1]
            child = next(it, None)
            if child is None:
                stack.pop()
                self.post[v] = next_post
                next_post += 1
                self.size[v] = next_pre - self.pre[v]
                continue
            self.depth[child] = self.depth[v] + 1
            self.pre[child] = next_pre
            self.order[next_pre] = child
            next_pre += 1
            stack.append((child, iter(self.children[child])))

    def check_reachable(self, v):
        if not (1 <= v <= self.n) or not self.reachable[v]:
            raise Unreachable(v)

    def is_descendant(self, u, v):
        """True iff u is in the subtree of v."""
        self.check_reachable(u)
        self.check_reachable(v)
        return self.pre[v] <= self.pre[u] and self.post[u] <= self.post[v]

    def nca(self, u, v):
        self.check_reachable(u)
        self.check_reachable(v)
        while self.depth[u] > self.depth[v]:
            u = self.parent[u]
        while self.depth[v] > self.depth[u]:
            v = self.parent[v]
        while u != v:
            u = self.parent[u]
            v = self.parent[v]
        return u

    def ancestor_child(self, v, w):
        """The child of w that is an ancestor of v (v a proper descendant of w)."""
        target = self.depth[w] + 1
        while self.depth[v] > target:
            v = self.parent[v]
        return v

    def dominators(self, v):
        """D[s, v] as a list from v up to the root."""
        self.check_reachable(v)
        path = [v]
        while v != self.root:
            v = self.parent[v]
            path.append(v)
        return path

    def parent_map(self):
        return {v: self.parent[v] for v in range(1, self.n + 1)
                if self.reachable[v] and v != self.root}

    def is_flat(self):
        return all(self.parent[v] == self.root
                   for v in range(1, self.n + 1)
                   if self.reachable[v] and v != self.root)

    def reachable_vertices(self):
        return [v for v in range(1, self.n + 1) if self.reachable[v]]


def nca(D, u, v):
    return D.nca(u, v)


def is_descendant(D, u, v):
    return D.is_descendant(u, v)


def preorder_of(D):
    return list(D.order)


def _compress(v, ancestor, label, semi):
    path = []
    while ancestor[ancestor[v]] != 0:
        path.append(v)
        v = ancestor[v]
    for x in reversed(path):
        a = ancestor[x]
        if semi[label[a]] < semi[label[x]]:
            label[x] = label[a]
        ancestor[x] = ancestor[a]


def _eval(v, ancestor, label, semi):
    if ancestor[v] == 0:
        return v
    _compress(v, ancestor, label, semi)
    return label[v]


def compute_dominators(G):
    """Lengauer-Tarjan with semidominators and path compression."""
    n, s = G.n, G.start
    semi = [0] * (n + 1)  # dfs number, later semidominator number
    vertex = [0] * (n + 2)
    dfs_parent = [0] * (n + 1)
    label = list(range(n + 1))
    ancestor = [0] * (n + 1)
    idom = [0] * (n + 1)
    bucket = [[] for _ in range(n + 1)]

    k = 1
    semi[s] = 1
    vertex[1] = s
    stack = [(s, iter(G.out_adj[s]))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if semi[w] == 0:
                dfs_parent[w] = v
                k += 1
                semi[w] = k
                vertex[k] = w
                stack.append((w, iter(G.out_adj[w])))
                break
        else:
            stack.pop()

    for i in range(k, 1, -1):
        w = vertex[i]
        for v in G.in_adj[w]:
            if semi[v] == 0:
                continue
            u = _eval(v, ancestor, label, semi)
            if semi[u] < semi[w]:
                semi[w] = semi[u]
        bucket[vertex[semi[w]]].append(w)
        p = dfs_parent[w]
        ancestor[w] = p
        for v in bucket[p]:
            u = _eval(v, ancestor, label, semi)
            idom[v] = u if semi[u] < semi[v] else p
        bucket[p] = []

    for i in range(2, k + 1):
        w = vertex[i]
        if idom[w] != vertex[semi[w]]:
            idom[w] = idom[idom[w]]

    parent = {vertex[i]: idom[vertex[i]] for i in range(2, k + 1)}
    return DomTree.from_parents(n, s, parent, order=[vertex[i] for i in range(2, k + 1)])


def brute_force_dominator_sets(G):
    """{w: set of dominators of w} by deleting each vertex in turn."""
    reach = G.reachable_from()
    sets = {w: {G.start} for w in G.vertices() if reach[w]}
    for v in G.vertices():
        if not reach[v] or v == G.start:
            continue
        without = G.reachable_from(skip=v)
        for w in sets:
            if not without[w]:
                sets[w].add(v)
    return sets


def brute_force_dominators(G):
    sets = brute_force_dominator_sets(G)
    parent = {}
    for w, doms in sets.items():
        if w == G.start:
            continue
        proper = [v for v in doms if v != w]
        parent[w] = max(proper, key=lambda v: len(sets[v]))
    return DomTree.from_parents(G.n, G.start, parent)


def networkx_dominators(G):
    """{v: d(v)} from networkx, for cross-checking at sizes the brute-force
    oracle cannot reach."""
    graph = nx.DiGraph(G.to_networkx())
    idom = nx.immediate_dominators(graph, G.start)
    return {v: d for v, d in idom.items() if v != G.start}


def derived_graph(G, D, w):
    """Flow graph on {w} + C(w) made of the derived edges entering C(w)."""
    D.check_reachable(w)
    if not D.children[w]:
        raise NoChildren(f"vertex {w} has no children in the dominator tree")
    kids = set(D.children[w])
    H = FlowGraph(G.n, w)
    seen = set()
    for v, u in G.edges():
        if u not in kids or not D.reachable[v]:
            continue
        if v == w:
            src = w
        else:
            src = D.ancestor_child(v, w)
            if src == u:
                continue  # u is an ancestor of v
        if (src, u) not in seen:
            seen.add((src, u))
            H.insert_raw_edge(src, u)
    return H


def is_preorder(D, delta):
    reachable = D.reachable_vertices()
    if len(delta) != len(reachable) or len(set(delta)) != len(delta):
        return False
    if not delta or delta[0] != D.root:
        return False
    if any(not (1 <= v <= D.n) or not D.reachable[v] for v in delta):
        return False
    stack = [D.root]
    for v in delta[1:]:
        p = D.parent[v]
        while stack and stack[-1] != p:
            stack.pop()
        if not stack:
            return False
        stack.append(v)
    return True


def is_low_high_order(G, D, delta):
    """delta is a preorder of D and every reachable v != root has its tree
    edge, or in-edges from u <delta v and from a non-descendant w >delta v."""
    if not is_preorder(D, delta):
        return False
    pos = {v: i for i, v in enumerate(delta)}
    for v in delta[1:]:
        dv = D.parent[v]
        has_low = has_high = False
        for u in G.in_adj[v]:
            if not D.reachable[u]:
                continue
            if u == dv:
                has_low = has_high = True
                break
            if pos[u] < pos[v]:
                has_low = True
            elif pos[u] > pos[v] and not D.is_descendant(u, v):
                has_high = True
        if not (has_low and has_high):
            return False
    return True


def certify_dominator_tree(G, T, delta):
    """Check that T, certified by delta, is the dominator tree of G."""
    reach = G.reachable_from()
    for v in G.vertices():
        if reach[v] != T.reachable[v]:
            return False
    for v, w in G.edges():
        if not (reach[v] and reach[w]) or w == T.root:
            continue
        if not T.is_descendant(v, T.parent[w]):
            return False
    return is_low_high_order(G, T, delta)
