"""Tests for the benchmark harness: generator, workloads, runner and CSV."""

import csv

import pytest

from lowhigh.bench import runner
from lowhigh.bench.checks import first_failure, subgraph_failure
from lowhigh.bench.rng import SplitMix64
from lowhigh.bench.runner import COLUMNS, Report, WorkloadSpec, run_experiment, write_csv
from lowhigh.bench.workloads import dynamize, random_insertions
from lowhigh.errors import SaturatedGraph, VerificationFailure
from lowhigh.graph import FlowGraph
from lowhigh.incremental import initialize
from lowhigh.twovcss import SubgraphResult

from tests.conftest import random_2vc, random_flow_graph


class TestSplitMix64:
    def test_reference_value(self):
        assert SplitMix64(0).next() == 0xE220A8397B1DCDAF

    def test_same_seed_same_sequence(self):
        a, b = SplitMix64(42), SplitMix64(42)
        assert [a.next() for _ in range(5)] == [b.next() for _ in range(5)]

    def test_below_range(self):
        rng = SplitMix64(7)
        values = [rng.below(6) for _ in range(300)]
        assert set(values) == set(range(6))

    def test_below_rejects_zero(self):
        with pytest.raises(ValueError):
            SplitMix64(1).below(0)

    def test_shuffle_is_permutation(self):
        items = SplitMix64(3).shuffle(list(range(20)))
        assert sorted(items) == list(range(20))


class TestDynamize:
    def test_g2_one_edge(self, g2):
        base, sequence = dynamize(g2, 0.2, seed=1)
        assert base.m == 4 and len(sequence) == 1

    def test_replay_restores_multiset(self):
        G = random_flow_graph(5, 30, 4)
        base, sequence = dynamize(G, 0.3, seed=9)
        for x, y in sequence:
            base.insert_raw_edge(x, y)
        assert base.edge_multiset() == G.edge_multiset()

    def test_deterministic(self, g2):
        assert dynamize(g2, 0.4, seed=8)[1] == dynamize(g2, 0.4, seed=8)[1]

    @pytest.mark.parametrize("percent", [0, 1, 1.5])
    def test_percent_out_of_range(self, g2, percent):
        with pytest.raises(ValueError):
            dynamize(g2, percent, seed=0)


class TestRandomInsertions:
    def test_fresh_distinct_edges(self):
        G = random_flow_graph(2, 20, 3)
        sequence = random_insertions(G, 0.5, seed=4)
        existing = set(G.edges())
        assert len(sequence) == len(set(sequence)) == 30
        assert all(u != v and (u, v) not in existing for u, v in sequence)

    def test_deterministic(self, g2):
        assert random_insertions(g2, 0.4, seed=6) == random_insertions(g2, 0.4, seed=6)

    def test_saturated(self, g3):
        with pytest.raises(SaturatedGraph):
            random_insertions(g3, 0.5, seed=0)

    def test_clamped_near_saturation(self):
        edges = [(u, v) for u in range(1, 5) for v in range(1, 5) if u != v][:10]
        sequence = random_insertions(FlowGraph(4, 1, edges), 0.9, seed=2)
        assert sorted(sequence) == [(4, 2), (4, 3)]


class TestChecks:
    def test_clean_state(self, g2):
        assert first_failure(initialize(g2)) is None

    def test_stale_tree_detected(self, g2):
        state = initialize(g2)
        state.graph.insert_raw_edge(1, 3)
        name, _ = first_failure(state)
        assert name == "dominator oracle"

    def test_subgraph_with_foreign_edge(self, g3):
        result = SubgraphResult(set(g3.edges()) | {(1, 1)})
        assert subgraph_failure(g3, result)[0] == "subgraph edges"


class TestRunExperiment:
    @pytest.mark.parametrize("algorithm", ["efficient", "simple", "slt", "slt-nca"])
    def test_verified_dynamize(self, algorithm):
        G = random_flow_graph(11, 15, 3)
        workload = WorkloadSpec("g.txt", "dynamize", 0.5, 3, algorithm, verify=True)
        report = run_experiment(workload, G)
        assert report.verified == "pass"
        assert report.m_final == G.m
        assert report.m_start == G.m - len(dynamize(G, 0.5, 3)[1])

    def test_random_mode_counts(self, g2):
        report = run_experiment(WorkloadSpec("g2.txt", "random", 0.4, 1, verify=True), g2)
        assert report.m_final == g2.m + 2
        assert report.verified == "pass"

    def test_work_counters_reported(self):
        G = random_flow_graph(12, 25, 3)
        report = run_experiment(WorkloadSpec("g.txt", "dynamize", 0.5, 0), G)
        assert report.nu_total >= 0 and report.mu_total >= report.nu_total
        assert report.verified == "skipped"

    def test_repeats_average(self, g2):
        report = run_experiment(WorkloadSpec("g2.txt", repeats=3, percent=0.4), g2)
        assert report.seconds >= 0

    def test_2vcss_row(self, g3):
        report = run_experiment(WorkloadSpec("g3.txt", "2vcss", algorithm="lhz", verify=True), g3)
        assert report.algo == "lhz" and report.m_final <= 4 * (g3.n - 1)
        assert report.verified == "pass"

    def test_2vcss_row_on_random_2vc(self):
        G = random_2vc(11, 30)
        report = run_experiment(WorkloadSpec("r.txt", "2vcss", algorithm="lhz", verify=True), G)
        assert report.m_final <= 4 * 29
        assert report.verified == "pass"

    def test_2vcss_wrong_algorithm(self, g3):
        with pytest.raises(ValueError):
            run_experiment(WorkloadSpec("g3.txt", "2vcss", algorithm="slt"), g3)

    def test_unknown_mode(self, g2):
        with pytest.raises(ValueError):
            run_experiment(WorkloadSpec("g2.txt", "shuffle"), g2)

    def test_broken_update_fails_verification(self, g1, monkeypatch):
        monkeypatch.setitem(runner.ALGORITHMS, "efficient",
                            lambda state, x, y: state.graph.insert_raw_edge(x, y))
        workload = WorkloadSpec("g1.txt", "dynamize", 0.5, 2, "efficient", verify=True)
        with pytest.raises(VerificationFailure) as info:
            run_experiment(workload, g1)
        assert info.value.check == "dominator oracle"
        assert info.value.replay() == ("g1.txt", 2, info.value.index)


class TestWriteCsv:
    def report(self):
        return Report("g2.txt", 5, 4, 5, "efficient", 0.25, 3, 7, 0, 0, "pass")

    def test_stdout(self, capsys):
        write_csv([self.report()])
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",".join(COLUMNS)
        assert lines[1] == "g2.txt,5,4,5,efficient,0.250000,3,7,0,0,pass"

    def test_file(self, tmp_path):
        out = tmp_path / "report.csv"
        write_csv([self.report(), self.report()], str(out))
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == list(COLUMNS) and len(rows) == 3
