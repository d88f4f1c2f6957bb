"""Queries answered from a maintained low-high state: two divergent
spanning trees, disjoint and avoiding paths, and valid edge sets for
fault-tolerant reachability."""

from dataclasses import dataclass, field

from lowhigh.errors import InvalidForest, Unreachable


@dataclass
class PathPair:
    """Two vertex iterators, each from s to its target."""
    p1: object
    p2: object


@dataclass
class ValidSet:
    edges: set = field(default_factory=set)

    def __len__(self):
        return len(self.edges)


def refresh_divergent(state, changed):
    """b(v) follows low(v), r(v) follows high(v); a missing witness means
    the tree edge (d(v), v)."""
    parent = state.dom.parent
    for v in changed:
        low, high = state.low[v], state.high[v]
        state.b[v] = low[0] if low is not None else parent[v]
        state.r[v] = high[0] if high is not None else parent[v]


def _path(parent, root, v):
    """Yield the tree path from root down to v; the walk starts on first use."""
    up = [v]
    while v != root:
        v = parent[v]
        up.append(v)
    yield from reversed(up)


def query_two_disjoint_paths(state, v, w):
    """Paths from s to v and to w meeting only at common dominators."""
    dom = state.dom
    dom.check_reachable(v)
    dom.check_reachable(w)
    s = dom.root
    if dom.pre[v] < dom.pre[w]:
        return PathPair(_path(state.b, s, v), _path(state.r, s, w))
    return PathPair(_path(state.r, s, v), _path(state.b, s, w))


def query_avoiding_path(state, v, w):
    """A path from s to v that avoids w, or None when w dominates v."""
    dom = state.dom
    dom.check_reachable(v)
    if w == v:
        return None
    if 1 <= w <= dom.n and dom.reachable[w]:
        if dom.is_descendant(v, w):
            return None
        if dom.pre[v] > dom.pre[w]:
            return _path(state.r, dom.root, v)
    return _path(state.b, dom.root, v)


def _check_forest(state, T):
    dom = state.dom
    G = state.graph
    for v, t in T.items():
        if t is None:
            continue
        if not G.has_edge(t, v):
            raise InvalidForest(f"edge ({t},{v}) is not in the graph")
        if v == dom.root:
            raise InvalidForest(f"start vertex {v} cannot have a parent")
        try:
            dom.check_reachable(v)
            dom.check_reachable(t)
        except Unreachable as e:
            raise InvalidForest(str(e))
        if dom.is_descendant(t, v):
            raise InvalidForest(f"edge ({t},{v}) leaves a descendant of {v}")
    color = {}
    for v in T:
        path = []
        u = v
        while u in T and T[u] is not None and color.get(u) is None:
            color[u] = v
            path.append(u)
            u = T[u]
        if color.get(u) == v and u in path:
            raise InvalidForest(f"parent links cycle through {u}")
        for u in path:
            color[u] = "done"


def valid_set(state, T):
    """Fewest extra edges that give the forest T the dominators of G.

    T maps a vertex to its forest parent; missing or None entries are roots."""
    _check_forest(state, T)
    dom = state.dom
    pre = dom.pre
    result = ValidSet()
    for v in dom.reachable_vertices():
        if v == dom.root:
            continue
        t = T.get(v)
        d = dom.parent[v]
        if t == d:
            continue
        if state.mark[v]:
            result.edges.add((d, v))
        elif t is None:
            result.edges.add(state.low[v])
            result.edges.add(state.high[v])
        elif pre[t] > pre[v]:
            result.edges.add(state.low[v])
        else:
            result.edges.add(state.high[v])
    return result


def _root_path_set(G, parent, root, v):
    seen = {v}
    limit = G.n
    while v != root:
        p = parent.get(v)
        if p is None or not G.has_edge(p, v) or len(seen) > limit:
            return None
        v = p
        seen.add(v)
    return seen


def verify_strongly_divergent(G, D, trees):
    """Every pair v, w has a B path and an R path that meet exactly in
    their common dominators. Cubic; meant for small graphs."""
    vertices = D.reachable_vertices()
    root = D.root
    b_sets, r_sets, d_sets = {}, {}, {}
    for v in vertices:
        if v == root:
            b_sets[v] = r_sets[v] = d_sets[v] = {root}
            continue
        b_sets[v] = _root_path_set(G, trees.b_parent, root, v)
        r_sets[v] = _root_path_set(G, trees.r_parent, root, v)
        if b_sets[v] is None or r_sets[v] is None:
            return False
        d_sets[v] = set(D.dominators(v))
    for v in vertices:
        for w in vertices:
            common = d_sets[v] & d_sets[w]
            if b_sets[v] & r_sets[w] != common and r_sets[v] & b_sets[w] != common:
                return False
    return True


def shared_edge_violations(state):
    """Vertices whose B and R parents coincide without being the forced
    tree edge of a marked, witness-less vertex."""
    bad = []
    dom = state.dom
    for v in dom.reachable_vertices():
        if v == dom.root or state.b[v] != state.r[v]:
            continue
        if (state.b[v] != dom.parent[v] or not state.mark[v]
                or state.low[v] is not None or state.high[v] is not None):
            bad.append(v)
    return bad


def certificate(state):
    """(tree parents, low-high order): what an independent checker needs."""
    return state.dom.parent_map(), state.order()
