"""Per-insertion verification against independent oracles.

Each check returns None on success or a short detail string; `first_failure`
runs them in order and names the first one that fails.
"""

from lowhigh import settings
from lowhigh.applications import shared_edge_violations, verify_strongly_divergent
from lowhigh.dominators import brute_force_dominators, certify_dominator_tree, networkx_dominators
from lowhigh.lowhigh import verify_low_high
from lowhigh.twovcss import is_2vc


def oracle_parents(G):
    if G.n <= settings.BRUTE_FORCE_LIMIT:
        return brute_force_dominators(G).parent_map()
    return networkx_dominators(G)


def check_dominators(state, **_):
    expected = oracle_parents(state.graph)
    got = state.dom.parent_map()
    if got != expected:
        wrong = sorted(v for v in set(got) | set(expected) if got.get(v) != expected.get(v))
        return f"parents differ at {wrong[:10]}"
    return None


def check_low_high(state, **_):
    if not verify_low_high(state.graph, state.dom, state.order()):
        return "order rejected"
    return None


def check_certificate(state, **_):
    if not certify_dominator_tree(state.graph, state.dom, state.order()):
        return "certificate rejected"
    return None


def check_strong_divergence(state, **_):
    if state.n > settings.STRONG_DIVERGENCE_LIMIT:
        return None
    if not verify_strongly_divergent(state.graph, state.dom, state.trees()):
        return "trees not strongly divergent"
    return None


def check_shared_edges(state, **_):
    bad = shared_edge_violations(state)
    if bad:
        return f"b(v) = r(v) off the forced tree edge at {bad[:10]}"
    return None


def check_affected(state, before=None, report=None):
    """Affected vertices are exactly those whose parent changed."""
    if before is None or report is None:
        return None
    after = state.dom.parent_map()
    moved = {v for v, p in after.items() if v in before and before[v] != p}
    if moved != set(report.affected):
        return f"reported {sorted(report.affected)}, oracle {sorted(moved)}"
    return None


CHECKS = (
    ("dominator oracle", check_dominators),
    ("low-high order", check_low_high),
    ("certificate", check_certificate),
    ("strong divergence", check_strong_divergence),
    ("shared edges", check_shared_edges),
    ("affected set", check_affected),
)


def first_failure(state, before=None, report=None):
    """(check name, detail) of the first failing check, or None."""
    for name, check in CHECKS:
        detail = check(state, before=before, report=report)
        if detail is not None:
            return name, detail
    return None


def subgraph_failure(G, result):
    """(check name, detail) for an LH-Z output, or None."""
    if not result.edges <= set(G.edges()):
        return "subgraph edges", "output contains edges outside the input"
    if result.edge_count > 4 * (G.n - 1):
        return "edge bound", f"{result.edge_count} > 4(n-1) = {4 * (G.n - 1)}"
    if not is_2vc(result.as_graph(G)):
        return "2-vertex-connectivity", "output is not 2-vertex-connected"
    return None
