"""Edge insertion: the affected-vertex search, the efficient and simple
update rules, replay initialization, and the recompute-from-scratch
baselines used for comparison."""

import sys
from dataclasses import dataclass, field

from lowhigh import settings
from lowhigh.applications import refresh_divergent
from lowhigh.dominators import DomTree, brute_force_dominators
from lowhigh.errors import InvariantViolation
from lowhigh.graph import FlowGraph
from lowhigh.lowhigh import LowHighState, derived_low_high, verify_low_high


@dataclass
class AffectedReport:
    affected: list = field(default_factory=list)
    last: dict = field(default_factory=dict)  # v -> edge that fixed v's bottleneck
    scanned: list = field(default_factory=list)
    nu: int = 0
    mu: int = 0
    z: int = 0
    c: int = 0


def affected_search(state, x, y):
    """Vertices whose immediate dominator changes when (x, y) is added.

    A vertex v below z = nca(x, y) is affected iff some path from y reaches
    v through vertices no shallower than v. The search keeps, per vertex,
    the best minimum depth over the paths found so far and settles vertices
    from the deepest bucket up, never going shallower than two below z."""
    dom = state.dom
    dom.check_reachable(x)
    dom.check_reachable(y)
    report = AffectedReport()
    if y == dom.root:
        return report
    z = dom.nca(x, y)
    report.z = z
    depth = dom.depth
    if x == y or depth[z] >= depth[dom.parent[y]]:
        return report

    out_adj = state.graph.out_adj
    in_adj = state.graph.in_adj
    floor = depth[z] + 2
    best = {y: depth[y]}
    last = {y: (x, y)}
    buckets = [[] for _ in range(depth[y] + 1)]
    buckets[depth[y]].append(y)
    done = set()
    mu = 0
    for key in range(depth[y], floor - 1, -1):
        bucket = buckets[key]
        while bucket:
            v = bucket.pop()
            if v in done or best[v] != key:
                continue
            done.add(v)
            report.scanned.append(v)
            mu += len(out_adj[v]) + len(in_adj[v])
            if key == depth[v]:
                report.affected.append(v)
            for w in out_adj[v]:
                if w in done:
                    continue
                k = min(key, depth[w])
                if k >= floor and k > best.get(w, -1):
                    best[w] = k
                    last[w] = (v, w)
                    buckets[k].append(w)

    report.last = {v: last[v] for v in report.affected}
    report.nu = len(report.scanned)
    report.mu = mu
    if report.affected:
        report.c = dom.ancestor_child(y, z)
    state.nu_total += report.nu
    state.mu_total += mu
    return report


def _restart(state):
    if settings.DEBUG_MODE:
        print(f"Full restart at m={state.graph.m}", file=sys.stderr)
    state.adopt(initialize(state.graph))
    state.restarts += 1


def _touch_up(state, x, y):
    """No vertex moved: keep mark(y) exact and give a witness-less y the new
    edge as one of its witnesses."""
    dom = state.dom
    if y == dom.root:
        return
    if x == dom.parent[y]:
        state.mark[y] = True
        return
    if state.low[y] is not None or state.high[y] is not None:
        return
    if x == y or dom.is_descendant(x, y):
        return
    if dom.pre[x] < dom.pre[y]:
        state.low[y] = (x, y)
    else:
        state.high[y] = (x, y)
    refresh_divergent(state, [y])


def _witnesses_hold(state, v):
    dom = state.dom
    pre = dom.pre
    low, high = state.low[v], state.high[v]
    if low is not None and not pre[low[0]] < pre[v]:
        return False
    if high is not None and not (pre[high[0]] > pre[v] and not dom.is_descendant(high[0], v)):
        return False
    return state.mark[v] or (low is not None and high is not None)


def _check_derived(state, ga, report, new_edge):
    x, z = new_edge[0], report.z
    missed = [v for v in report.scanned if v not in ga.owner]
    if missed:
        raise InvariantViolation("scanned vertices lie below affected ones", f"{missed}")
    for v in report.affected:
        from_z = state.graph.in_adj[v].count(z)
        if v == new_edge[1] and x == z:
            from_z -= 1
        if from_z:
            raise InvariantViolation("affected vertices have no edge from z", f"v={v}")
    if len(ga.vertices) > report.nu + 4:
        raise InvariantViolation("derived graph vertex bound",
                                 f"{len(ga.vertices)} > {report.nu} + 4")
    if ga.raw_edge_count > report.mu + 5:
        raise InvariantViolation("derived graph edge bound",
                                 f"{ga.raw_edge_count} > {report.mu} + 5")
    H, _ = ga.to_flow_graph()
    D = brute_force_dominators(H)
    if not all(D.reachable[i] for i in H.vertices()) or not D.is_flat():
        raise InvariantViolation("derived graph is flat", f"z={z}, A={report.affected}")


def _apply(state, x, y, report):
    dom = state.dom
    z, c, affected = report.z, report.c, report.affected
    before = {v: dom.depth[v] for v in report.scanned}
    old_children = list(dom.children[z])

    children = derived_low_high(state, z, c, affected, report.scanned, report.last, (x, y))
    if state.checks:
        _check_derived(state, state.last_derived, report, (x, y))

    for v in affected:
        dom.children[dom.parent[v]].remove(v)
        dom.parent[v] = z
    dom.children[z] = children
    dom.renumber(z)

    for v in affected:
        state.mark[v] = False
    if x == z:
        state.mark[y] = True

    changed = affected + [c]
    for v in changed:
        state.low[v], state.high[v] = state.find_witnesses(v)
    moved = set(changed)
    for v in old_children:
        if v not in moved and not _witnesses_hold(state, v):
            state.low[v], state.high[v] = state.find_witnesses(v)
            changed.append(v)
    refresh_divergent(state, changed)

    if state.checks:
        for v in report.scanned:
            if dom.depth[v] >= before[v]:
                raise InvariantViolation("scanned vertices get shallower",
                                         f"v={v}: {before[v]} -> {dom.depth[v]}")
        kept = [v for v in children if v not in moved or v == c]
        if kept != old_children:
            raise InvariantViolation("new children order augments the old one",
                                     f"{old_children} -> {children}")
        for v in changed:
            if not _witnesses_hold(state, v):
                raise InvariantViolation("unmarked vertices have both witnesses", f"v={v}")


def insert_edge(state, x, y):
    """Store (x, y) and bring tree, order, marks, witnesses and divergent
    parents up to date. Returns the AffectedReport, or None when the
    insertion changed nothing or forced a full restart."""
    state.graph.insert_raw_edge(x, y)
    dom = state.dom
    if not dom.reachable[x]:
        return None
    if not dom.reachable[y]:
        _restart(state)
        return None
    report = affected_search(state, x, y)
    state.last_report = report
    if not report.affected:
        _touch_up(state, x, y)
    else:
        _apply(state, x, y, report)
    return report


def insert_edge_simple(state, x, y):
    """Rebuild from the sparse subgraph B + R + Last(A) + (x, y), which has
    the same dominators as the full graph after the insertion."""
    G = state.graph
    G.insert_raw_edge(x, y)
    dom = state.dom
    if not dom.reachable[x]:
        return None
    if not dom.reachable[y]:
        _restart(state)
        return None
    report = affected_search(state, x, y)
    state.last_report = report

    keep = {(x, y)}
    for v in dom.reachable_vertices():
        if v != dom.root:
            keep.add((state.b[v], v))
            keep.add((state.r[v], v))
    keep.update(report.last.values())
    fresh = initialize(FlowGraph(G.n, G.start, sorted(keep)))

    state.adopt(fresh)
    parent = state.dom.parent
    for v in state.dom.reachable_vertices():
        if v != state.dom.root:
            state.mark[v] = G.has_edge(parent[v], v)
    return report


def initialize(G):
    """Build a state for G by replay: DFS tree edges first, attached as
    marked leaves, then every other edge through insert_edge."""
    H = FlowGraph(G.n, G.start)
    state = LowHighState(H, DomTree(G.n, G.start))
    dom = state.dom

    seen = [False] * (G.n + 1)
    seen[G.start] = True
    tree = []
    stack = [(G.start, iter(G.out_adj[G.start]))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if not seen[w]:
                seen[w] = True
                tree.append((v, w))
                stack.append((w, iter(G.out_adj[w])))
                break
        else:
            stack.pop()

    for v, w in tree:
        H.insert_raw_edge(v, w)
        dom.parent[w] = v
        dom.children[v].append(w)
        dom.reachable[w] = True
        state.mark[w] = True
        state.b[w] = state.r[w] = v
    dom.renumber()

    pending = set(tree)
    for u, v in G.edges():
        if (u, v) in pending:
            pending.discard((u, v))
            continue
        insert_edge(state, u, v)
    return state


def compute_low_high(G):
    state = initialize(G)
    return state.dom, state.order(), state.trees()


def _recompute(state):
    state.adopt(initialize(state.graph))
    state.restarts += 1


def baseline_slt(state, x, y):
    state.graph.insert_raw_edge(x, y)
    if state.dom.reachable[x]:
        _recompute(state)


def baseline_slt_nca(state, x, y):
    state.graph.insert_raw_edge(x, y)
    dom = state.dom
    if not dom.reachable[x]:
        return
    if not dom.reachable[y]:
        _recompute(state)
        return
    if y == dom.root:
        return
    if dom.depth[dom.nca(x, y)] < dom.depth[dom.parent[y]]:
        _recompute(state)
        return
    _touch_up(state, x, y)


def check_state(state):
    """True iff the maintained order is a low-high order of the stored graph."""
    return verify_low_high(state.graph, state.dom, state.order())
