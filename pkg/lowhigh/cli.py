"""\
Usages:
    lowhigh bench --graph FILE [--graph FILE ...] --mode MODE --percent P
                  --algo ALGO --seed N [--verify] [--repeats K] [--jobs J]
                  [--out report.csv]
    lowhigh query --graph FILE two-paths V W
    lowhigh query --graph FILE avoid V W
    lowhigh query --graph FILE valid-set TFILE
    lowhigh query --graph FILE dominators
    lowhigh query --graph FILE certify
    lowhigh extract --graph FILE --out FILE

Modes:
    dynamize    remove P of the edges, then insert them back one by one
    random      insert P * m new random edges
    2vcss       sparse 2-vertex-connected subgraph (algo lhz)

Algorithms:
    efficient   incremental low-high maintenance
    simple      rebuild from the divergent-tree subgraph per insertion
    slt         recompute from scratch when the source is reachable
    slt-nca     recompute only when the dominator tree changes
    lhz         2VCSS approximation (mode 2vcss only)

Options:
    -v, --version   print version and license
    --debug         diagnostics on stderr

Exit status is 0 on success, 2 when a verified run or a certificate
check fails, 1 on any other error.
"""

import argparse
import sys

import networkx as nx

from lowhigh import settings, __version__, __license__, __author__, __url__
from lowhigh.applications import (
    certificate,
    query_avoiding_path,
    query_two_disjoint_paths,
    valid_set,
)
from lowhigh.bench.runner import ALGORITHMS, MODES, WorkloadSpec, run_many, write_csv
from lowhigh.dominators import DomTree, certify_dominator_tree
from lowhigh.errors import LowHighError, ParseError, VerificationFailure
from lowhigh.graph import FlowGraph, read_graph, write_graph
from lowhigh.incremental import initialize


def _percent(text):
    """Values below 1 are fractions of m; 1 and above are percentages."""
    value = float(text)
    if value >= 1:
        value /= 100
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"percent must lie in (0, 100), got {text}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="lowhigh", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--version", action="store_true", help="print version and exit")
    parser.add_argument("--debug", action="store_true", help="diagnostics on stderr")
    commands = parser.add_subparsers(dest="command")

    bench = commands.add_parser("bench", help="run insertion workloads and write CSV rows")
    bench.add_argument("--graph", action="append", required=True, help="input graph (repeatable)")
    bench.add_argument("--mode", choices=MODES, default="dynamize")
    bench.add_argument("--percent", type=_percent, default=0.1,
                       help="fraction of edges below 1, or a percentage from 1 up")
    bench.add_argument("--algo", choices=sorted(ALGORITHMS) + ["lhz"], default="efficient")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--verify", action="store_true", help="check every insertion against oracles")
    bench.add_argument("--repeats", type=int, default=1, help="timed replays averaged per row")
    bench.add_argument("--jobs", type=int, default=1, help="threads for independent graphs")
    bench.add_argument("--out", help="CSV path (stdout when omitted)")

    query = commands.add_parser("query", help="answer queries from a low-high state")
    query.add_argument("--graph", required=True)
    kinds = query.add_subparsers(dest="query", required=True)
    for name in ("two-paths", "avoid"):
        q = kinds.add_parser(name)
        q.add_argument("v", type=int)
        q.add_argument("w", type=int)
    kinds.add_parser("valid-set").add_argument("tfile", help="forest edges, one 'parent child' per line")
    kinds.add_parser("dominators")
    kinds.add_parser("certify")

    extract = commands.add_parser("extract", help="write the largest strongly connected component")
    extract.add_argument("--graph", required=True)
    extract.add_argument("--out", required=True)
    return parser


def read_forest(path):
    """{child: parent} from 'parent child' lines; '#' starts a comment."""
    forest = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 2:
                raise ParseError(lineno, "forest line must be 'parent child'")
            try:
                t, v = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(lineno, f"expected two integers, got {line!r}")
            if v in forest:
                raise ParseError(lineno, f"vertex {v} has two parents")
            forest[v] = t
    return forest


def _print_path(path):
    print(" ".join(map(str, path)))


def run_query(args):
    state = initialize(read_graph(args.graph))
    if args.query == "two-paths":
        pair = query_two_disjoint_paths(state, args.v, args.w)
        _print_path(pair.p1)
        _print_path(pair.p2)
    elif args.query == "avoid":
        path = query_avoiding_path(state, args.v, args.w)
        if path is None:
            print("none")
        else:
            _print_path(path)
    elif args.query == "valid-set":
        for u, v in sorted(valid_set(state, read_forest(args.tfile)).edges):
            print(u, v)
    elif args.query == "dominators":
        for v, d in sorted(state.dom.parent_map().items()):
            print(v, d)
    elif args.query == "certify":
        parents, order = certificate(state)
        tree = DomTree.from_parents(state.n, state.start, parents, order=order[1:])
        if not certify_dominator_tree(state.graph, tree, order):
            print("certificate rejected", file=sys.stderr)
            return 2
        print("certified")
    return 0


def run_extract(args):
    G = read_graph(args.graph)
    graph = nx.DiGraph(G.to_networkx())
    largest = max(nx.strongly_connected_components(graph), key=lambda c: (len(c), -min(c)))
    ids = {v: i for i, v in enumerate(sorted(largest), 1)}
    H = FlowGraph(len(ids), 1, ((ids[u], ids[v]) for u, v in G.edges()
                                if u in ids and v in ids))
    write_graph(H, args.out)
    if settings.DEBUG_MODE:
        print(f"Kept {H.n} of {G.n} vertices, {H.m} of {G.m} edges", file=sys.stderr)
    return 0


def run_bench(args):
    if args.repeats < 1:
        print(f"Warning: --repeats {args.repeats} raised to 1", file=sys.stderr)
        args.repeats = 1
    workloads = [WorkloadSpec(path, args.mode, args.percent, args.seed, args.algo,
                               args.verify, args.repeats) for path in args.graph]
    write_csv(run_many(workloads, args.jobs), args.out)
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.version:
        print(__version__)
        print(__license__, "License")
        print("Copyright (c) 2026", __author__)
        if __url__:
            print(__url__)
        sys.exit()

    if args.debug:
        settings.DEBUG_MODE = True
    if args.command is None:
        parser.print_help()
        sys.exit("ERROR: no command given.")

    try:
        if args.command == "bench":
            code = run_bench(args)
        elif args.command == "query":
            code = run_query(args)
        else:
            code = run_extract(args)
    except VerificationFailure as e:
        print(f"Verification failed: {e}", file=sys.stderr)
        graph, seed, index = e.replay()
        print(f"Replay with graph={graph} seed={seed} index={index}", file=sys.stderr)
        sys.exit(2)
    except (LowHighError, ValueError) as e:
        sys.exit(f"ERROR: {e}")
    except OSError as e:
        sys.exit(f"ERROR: {e.strerror}: {e.filename}")
    sys.exit(code)


if __name__ == "__main__":
    main()
