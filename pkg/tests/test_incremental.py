"""Tests for edge insertion: the affected search, both update rules, replay
initialization and the recompute baselines."""

import time

import pytest

import lowhigh.incremental as incremental_module
from lowhigh.applications import verify_strongly_divergent
from lowhigh.bench.checks import first_failure
from lowhigh.bench.workloads import random_insertions
from lowhigh.dominators import brute_force_dominators, compute_dominators
from lowhigh.graph import FlowGraph
from lowhigh.incremental import (
    affected_search,
    baseline_slt,
    baseline_slt_nca,
    check_state,
    compute_low_high,
    initialize,
    insert_edge,
    insert_edge_simple,
)

from tests.conftest import G2_EDGES, random_flow_graph, random_strongly_connected


def replay_checked(G, insert=insert_edge):
    """Insert G's edges one by one into an empty state, checking every step."""
    state = initialize(FlowGraph(G.n, G.start))
    state.checks = True
    for i, (x, y) in enumerate(G.edges()):
        before = state.dom.parent_map()
        report = insert(state, x, y)
        failure = first_failure(state, before, report)
        assert failure is None, f"insertion {i} ({x}, {y}): {failure}"
    return state


def sweep_graph(seed, max_n=30):
    return random_flow_graph(seed, 5 + seed % (max_n - 4), 1.5 + (seed % 10) * 0.5)


class TestAffectedSearch:
    def test_g2_insert_1_3(self, g2):
        state = initialize(g2)
        state.graph.insert_raw_edge(1, 3)
        report = affected_search(state, 1, 3)
        assert report.affected == [3]
        assert (report.z, report.c) == (1, 2)
        assert report.last[3] == (1, 3)
        assert 4 not in report.scanned

    def test_g2_insert_2_4_is_empty(self, g2):
        state = initialize(g2)
        report = affected_search(state, 2, 4)
        assert report.affected == [] and report.scanned == []
        assert report.z == 1

    def test_g1_insert_1_4(self, g1):
        state = initialize(g1)
        report = affected_search(state, 1, 4)
        assert report.affected == [4]
        assert report.z == 1 and report.c == 2

    def test_search_stops_above_shared_entry(self):
        # 4 is also entered from 5, so d(4) = 1 and nothing below it moves
        G = FlowGraph(6, 1, [(1, 2), (2, 3), (3, 4), (4, 6), (1, 5), (5, 4)])
        state = initialize(G)
        state.graph.insert_raw_edge(1, 3)
        report = affected_search(state, 1, 3)
        assert report.affected == [3]
        assert 6 not in report.scanned

    def test_counters_accumulate(self, g2):
        state = initialize(g2)
        state.nu_total = state.mu_total = 0
        state.graph.insert_raw_edge(1, 3)
        report = affected_search(state, 1, 3)
        assert (state.nu_total, state.mu_total) == (report.nu, report.mu) == (1, 3)


class TestInsertEdge:
    def test_g2_insert_1_3(self, g2):
        state = initialize(g2)
        insert_edge(state, 1, 3)
        assert state.dom.parent_map() == {2: 1, 3: 1, 4: 1, 5: 1}
        assert check_state(state)
        assert state.order().index(4) < state.order().index(5)
        assert state.mark[3]

    def test_self_loop_changes_nothing(self, g1):
        state = initialize(g1)
        before = state.dom.parent_map()
        report = insert_edge(state, 3, 3)
        assert report.affected == []
        assert state.dom.parent_map() == before

    def test_unreachable_source_only_stores(self):
        state = initialize(FlowGraph(7, 1, G2_EDGES))
        before = (state.dom.parent_map(), state.order())
        assert insert_edge(state, 7, 2) is None
        assert state.graph.m == 6
        assert (state.dom.parent_map(), state.order()) == before

    def test_unreachable_target_restarts(self):
        state = initialize(FlowGraph(6, 1, G2_EDGES))
        assert insert_edge(state, 5, 6) is None
        assert state.restarts == 1
        assert state.dom.parent[6] == 5
        assert check_state(state)

    def test_duplicate_tree_edge_keeps_mark(self, g1):
        state = initialize(g1)
        insert_edge(state, 1, 2)
        assert state.mark[2]
        assert check_state(state)

    def test_two_entries_give_both_witnesses(self):
        state = initialize(FlowGraph(4, 1, [(1, 2), (1, 3), (2, 4), (3, 4)]))
        assert state.low[4] is not None and state.high[4] is not None
        assert not state.mark[4]

    def test_checks_on(self, g2):
        state = initialize(g2)
        state.checks = True
        insert_edge(state, 1, 3)
        assert check_state(state)

    def test_order_stays_low_high_after_shortcut(self):
        G = FlowGraph(6, 1, [(1, 5), (3, 4), (6, 3), (5, 3), (1, 6), (2, 5)])
        state = initialize(G)
        state.checks = True
        insert_edge(state, 5, 4)
        assert state.dom.parent[4] == 1
        assert state.dom.parent_map() == brute_force_dominators(state.graph).parent_map()
        assert check_state(state)

    @pytest.mark.parametrize("seed", range(40))
    def test_random_replay(self, seed):
        replay_checked(sweep_graph(seed))

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(40, 200))
    def test_random_replay_full_sweep(self, seed):
        replay_checked(sweep_graph(seed, max_n=60))


class TestInsertEdgeSimple:
    def test_g2_insert_1_3(self, g2):
        state = initialize(g2)
        insert_edge_simple(state, 1, 3)
        assert state.dom.parent_map() == {2: 1, 3: 1, 4: 1, 5: 1}
        assert check_state(state)
        assert state.graph.m == 6

    def test_no_change_when_nca_is_parent(self, g2):
        state = initialize(g2)
        before = state.dom.parent_map()
        insert_edge_simple(state, 2, 4)
        assert state.dom.parent_map() == before
        assert check_state(state)

    def test_rebuild_keeps_fallback_count(self, g2, monkeypatch):
        real = incremental_module.initialize

        def counted(G):
            fresh = real(G)
            fresh.fallbacks += 3
            return fresh

        state = initialize(g2)
        before = state.fallbacks
        monkeypatch.setattr(incremental_module, "initialize", counted)
        insert_edge_simple(state, 1, 3)
        assert state.fallbacks == before + 3
        assert check_state(state)

    @pytest.mark.parametrize("seed", range(30))
    def test_agrees_with_efficient(self, seed):
        G = sweep_graph(seed)
        fast = initialize(FlowGraph(G.n, G.start))
        slow = initialize(FlowGraph(G.n, G.start))
        for x, y in G.edges():
            insert_edge(fast, x, y)
            insert_edge_simple(slow, x, y)
            assert fast.dom.parent_map() == slow.dom.parent_map()
            assert check_state(slow)
            assert first_failure(slow) is None


class TestInitialize:
    def test_chain(self, g1):
        state = initialize(g1)
        assert state.dom.parent_map() == {2: 1, 3: 2, 4: 3}
        assert state.order() == [1, 2, 3, 4]
        assert all(state.mark[v] for v in (2, 3, 4))

    def test_g2_matches_oracle(self, g2):
        state = initialize(g2)
        assert state.dom.parent_map() == brute_force_dominators(g2).parent_map()
        assert check_state(state)

    def test_only_start_reachable(self):
        state = initialize(FlowGraph(4, 1, [(2, 3), (3, 4)]))
        assert state.order() == [1]
        assert state.graph.m == 2

    def test_keeps_edge_multiset(self, g3):
        state = initialize(g3)
        assert state.graph.edge_multiset() == g3.edge_multiset()


class TestComputeLowHigh:
    def test_g3(self, g3):
        D, order, trees = compute_low_high(g3)
        assert D.is_flat()
        assert sorted(order) == [1, 2, 3]
        assert verify_strongly_divergent(g3, D, trees)

    def test_g2_trees_strongly_divergent(self, g2):
        D, _, trees = compute_low_high(g2)
        assert verify_strongly_divergent(g2, D, trees)

    def test_chain_trees_coincide(self, g1):
        _, _, trees = compute_low_high(g1)
        assert trees.b_parent == trees.r_parent == {2: 1, 3: 2, 4: 3}


class TestBaselines:
    def test_slt_nca_skips_when_nca_is_parent(self, g2):
        state = initialize(g2)
        baseline_slt_nca(state, 2, 4)
        assert state.restarts == 0
        assert check_state(state)

    def test_slt_nca_recomputes_on_change(self, g2):
        state = initialize(g2)
        baseline_slt_nca(state, 1, 3)
        assert state.restarts == 1
        assert state.dom.parent_map() == {2: 1, 3: 1, 4: 1, 5: 1}

    def test_slt_ignores_unreachable_source(self):
        state = initialize(FlowGraph(6, 1, G2_EDGES))
        baseline_slt(state, 6, 2)
        assert state.restarts == 0
        assert state.graph.m == 6

    @pytest.mark.parametrize("seed", range(15))
    def test_baselines_agree(self, seed):
        G = sweep_graph(seed)
        a = initialize(FlowGraph(G.n, G.start))
        b = initialize(FlowGraph(G.n, G.start))
        for x, y in G.edges():
            baseline_slt(a, x, y)
            baseline_slt_nca(b, x, y)
            assert a.dom.parent_map() == b.dom.parent_map() == compute_dominators(a.graph).parent_map()
            assert check_state(a) and check_state(b)


class TestWorkBound:
    @pytest.mark.parametrize("seed", range(20))
    def test_scanned_work_within_mn(self, seed):
        G = sweep_graph(seed)
        state = replay_checked(G)
        assert state.nu_total + state.mu_total <= (G.n + 1) * (G.m + G.n)

    @pytest.mark.slow
    @pytest.mark.timeout(600)
    def test_doubling_insertions_is_subquadratic(self):
        G = random_strongly_connected(7, 1000, 3000)
        work = []
        for k in (0.1, 0.2):
            sequence = random_insertions(G, k, seed=11)
            state = initialize(G)
            state.nu_total = state.mu_total = 0
            for x, y in sequence:
                insert_edge(state, x, y)
            work.append(state.nu_total + state.mu_total)
        assert work[1] < 4 * max(work[0], 1)


@pytest.mark.slow
@pytest.mark.timeout(900)
def test_efficient_beats_simple_beats_recompute():
    """Per-insertion wall time on a random graph with n = 1000, m >= 5000;
    the recompute baseline runs on a prefix of the sequence."""
    G = random_strongly_connected(3, 1000, 4000)
    sequence = random_insertions(G, 0.1, seed=5)

    def per_insertion(insert, prefix):
        state = initialize(G)
        steps = sequence[:prefix]
        started = time.perf_counter()
        for x, y in steps:
            insert(state, x, y)
        return (time.perf_counter() - started) / len(steps)

    efficient = per_insertion(insert_edge, len(sequence))
    simple = per_insertion(insert_edge_simple, 60)
    slt = per_insertion(baseline_slt, 10)
    assert efficient < simple < slt
