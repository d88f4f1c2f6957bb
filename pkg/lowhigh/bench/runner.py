"""Run one workload (graph, insertion sequence, algorithm) and report a CSV
row. Only the insertion replay is timed; parsing, initialization and
verification are not."""

import csv
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from lowhigh import settings
from lowhigh.bench.checks import first_failure, subgraph_failure
from lowhigh.bench.workloads import dynamize, random_insertions
from lowhigh.errors import InvariantViolation, VerificationFailure
from lowhigh.graph import read_graph
from lowhigh.incremental import (
    baseline_slt,
    baseline_slt_nca,
    initialize,
    insert_edge,
    insert_edge_simple,
)
from lowhigh.twovcss import lh_z

ALGORITHMS = {
    "efficient": insert_edge,
    "simple": insert_edge_simple,
    "slt": baseline_slt,
    "slt-nca": baseline_slt_nca,
}
MODES = ("dynamize", "random", "2vcss")
COLUMNS = ("graph", "n", "m_start", "m_final", "algo", "seconds",
           "nu_total", "mu_total", "restarts", "fallbacks", "verified")


@dataclass
class WorkloadSpec:
    graph: str
    mode: str = "dynamize"
    percent: float = 0.1
    seed: int = 0
    algorithm: str = "efficient"
    verify: bool = False
    repeats: int = 1


@dataclass
class Report:
    graph: str
    n: int
    m_start: int
    m_final: int
    algo: str
    seconds: float
    nu_total: int
    mu_total: int
    restarts: int
    fallbacks: int
    verified: str

    def row(self):
        return [self.graph, self.n, self.m_start, self.m_final, self.algo,
                f"{self.seconds:.6f}", self.nu_total, self.mu_total,
                self.restarts, self.fallbacks, self.verified]


def _replay(state, sequence, insert, workload):
    """Feed the sequence to `insert`; return the summed insertion time."""
    elapsed = 0.0
    collect = workload.verify and workload.algorithm in ("efficient", "simple")
    for index, (x, y) in enumerate(sequence):
        before = state.dom.parent_map() if workload.verify else None
        started = time.perf_counter()
        try:
            report = insert(state, x, y)
        except InvariantViolation as e:
            raise VerificationFailure(index, e.check, workload.seed, workload.graph, e.detail)
        elapsed += time.perf_counter() - started
        if workload.verify:
            failure = first_failure(state, before, report if collect else None)
            if failure is not None:
                check, detail = failure
                raise VerificationFailure(index, check, workload.seed, workload.graph, detail)
    return elapsed


def _run_2vcss(workload, G, name):
    if workload.algorithm != "lhz":
        raise ValueError(f"mode 2vcss runs algorithm lhz, not {workload.algorithm!r}")
    times = []
    result = None
    for _ in range(max(1, workload.repeats)):
        started = time.perf_counter()
        result = lh_z(G)
        times.append(time.perf_counter() - started)
    verdict = "skipped"
    if workload.verify:
        failure = subgraph_failure(G, result)
        if failure is not None:
            check, detail = failure
            raise VerificationFailure(0, check, workload.seed, workload.graph, detail)
        verdict = "pass"
    return Report(name, G.n, G.m, result.edge_count, "lhz",
                  sum(times) / len(times), 0, 0, 0, 0, verdict)


def run_experiment(workload, G=None):
    """Build the described workload, replay it and return a Report.

    Raises VerificationFailure at the first failing check in verify mode."""
    if workload.mode not in MODES:
        raise ValueError(f"unknown mode {workload.mode!r}")
    if G is None:
        G = read_graph(workload.graph)
    name = os.path.basename(workload.graph)
    if workload.mode == "2vcss":
        return _run_2vcss(workload, G, name)
    if workload.algorithm not in ALGORITHMS:
        raise ValueError(f"algorithm {workload.algorithm!r} does not process insertions")

    if workload.mode == "dynamize":
        base, sequence = dynamize(G, workload.percent, workload.seed)
    else:
        base, sequence = G, random_insertions(G, workload.percent, workload.seed)
    insert = ALGORITHMS[workload.algorithm]

    times = []
    first = None
    for run in range(max(1, workload.repeats)):
        state = initialize(base)
        state.nu_total = state.mu_total = state.restarts = state.fallbacks = 0
        state.checks = workload.verify and run == 0
        run_workload = workload if run == 0 else replace(workload, verify=False)
        times.append(_replay(state, sequence, insert, run_workload))
        if first is None:
            first = state

    seconds = sum(times) / len(times)
    if settings.DEBUG_MODE:
        print(f"{name} {workload.algorithm}: {len(sequence)} insertions, "
              f"{seconds:.4f}s mean over {len(times)} run(s)", file=sys.stderr)
    return Report(name, base.n, base.m, first.graph.m, workload.algorithm, seconds,
                  first.nu_total, first.mu_total, first.restarts, first.fallbacks,
                  "pass" if workload.verify else "skipped")


def run_many(workloads, jobs=1):
    """Reports in the order of workloads; independent workloads on `jobs` threads."""
    if jobs <= 1:
        return [run_experiment(workload) for workload in workloads]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_experiment, workloads))


def write_csv(reports, out=None):
    """Header plus one row per report, to the path `out` or stdout."""
    if out is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(COLUMNS)
        writer.writerows(r.row() for r in reports)
        return
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        writer.writerows(r.row() for r in reports)
