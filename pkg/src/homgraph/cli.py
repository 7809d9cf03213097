"""Command-line interface.

Exit codes: 0 success, 1 negative answer (graphs not separated),
2 unreadable or malformed input, 3 work cap exceeded, 4 input violates an
operation's contract (size mismatch, mixed vertex counts, ...).
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from homgraph import graphon as gph
from homgraph.exceptions import CapExceededError, FormatError
from homgraph.graph import LabeledGraph, edit_distance, labeled_edit_distance
from homgraph.hom import hom, hom_brute, hom_labeled, hom_labeled_brute
from homgraph.io import (
    dataset_from_json,
    dump_json,
    graph_from_json,
    graph_to_json,
    graphon_from_json,
    load_json,
    model_from_json,
    model_to_json,
    pattern_from_json,
    pattern_to_json,
)
from homgraph.model import (
    distinct_tuples,
    fit,
    fit_equivariant,
    predict,
    predict_equivariant,
    residual_curve,
    separate,
    separate_labeled,
)
from homgraph.patterns import LabeledPattern, enumerate_labeled_patterns, enumerate_patterns
from homgraph.treedecomp import tree_decomposition

EXIT_OK, EXIT_NEGATIVE, EXIT_FORMAT, EXIT_CAP, EXIT_CONTRACT = 0, 1, 2, 3, 4


def fmt(x):
    return format(float(x), ".15g")


def _out(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_hom(args):
    pattern = pattern_from_json(load_json(args.pattern))
    g = graph_from_json(load_json(args.graph))
    W = g.graph.weights if isinstance(g, LabeledGraph) else g.weights
    W = W + args.shift * np.eye(W.shape[0])
    if args.labeled:
        if not isinstance(g, LabeledGraph):
            raise FormatError("--labeled needs a graph with labels", field="graph.labels")
        if not isinstance(pattern, LabeledPattern):
            pattern = LabeledPattern(pattern, g.k)
        fn = hom_labeled if args.engine == "dp" else hom_labeled_brute
        value = fn(pattern, W, g.labels)
    else:
        fn = hom if args.engine == "dp" else hom_brute
        value = fn(pattern, W)
    print(fmt(value))
    return EXIT_OK


def cmd_atlas(args):
    if args.k:
        patterns = enumerate_labeled_patterns(args.max_m, args.k, args.connected)
    else:
        patterns = enumerate_patterns(args.max_m, args.connected)
    counts = {}
    for p in patterns:
        counts[p.m] = counts.get(p.m, 0) + 1
    _out(dump_json([pattern_to_json(p) for p in patterns]) + "\n", args.out)
    stream = sys.stdout if args.out else sys.stderr
    for m in sorted(counts):
        print(f"m={m}: {counts[m]}", file=stream)
    print(f"total: {len(patterns)}", file=stream)
    return EXIT_OK


def _residual_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["max_m", "n_patterns", "sse", "relative_residual"])
    for r in rows:
        writer.writerow([r["max_m"], r["n_patterns"], fmt(r["sse"]), fmt(r["relative_residual"])])
    return buf.getvalue()


def cmd_fit(args):
    data = dataset_from_json(load_json(args.dataset))
    opts = dict(shift=args.shift, ridge=args.ridge, fit_intercept=not args.no_intercept,
                normalization=args.normalization)
    k = data.k
    if k is None:
        patterns = enumerate_patterns(args.max_m, args.connected)
        model = fit(data, patterns, **opts)
    else:
        patterns = enumerate_labeled_patterns(args.max_m, k, args.connected)
        model = fit_equivariant(data, patterns, **opts)
    dump_json(model_to_json(model), args.out)
    rows = residual_curve(data, args.max_m, connected_only=args.connected, **opts)
    _out(_residual_csv(rows), args.report)
    return EXIT_OK


def _load_graphs(obj):
    if isinstance(obj, list):
        graphs = []
        for i, item in enumerate(obj):
            g = graph_from_json(item, f"input[{i + 1}]")
            graphs.append(g.graph if isinstance(g, LabeledGraph) else g)
        return graphs
    g = graph_from_json(obj)
    return [g.graph if isinstance(g, LabeledGraph) else g]


def cmd_predict(args):
    model = model_from_json(load_json(args.model))
    graphs = _load_graphs(load_json(args.input))
    lines = []
    for g in graphs:
        if model.equivariant:
            values = predict_equivariant(model, g)
            tuples = distinct_tuples(g.n, model.k)
            lines.append(json.dumps({"tuples": [[x + 1 for x in t] for t in tuples],
                                     "values": [float(fmt(values[t])) for t in tuples]}))
        else:
            lines.append(fmt(predict(model, g)))
    _out("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_separate(args):
    g1 = graph_from_json(load_json(args.graph1), "graph1")
    g2 = graph_from_json(load_json(args.graph2), "graph2")
    if args.labeled:
        if not (isinstance(g1, LabeledGraph) and isinstance(g2, LabeledGraph)):
            raise FormatError("--labeled needs labels on both graphs", field="labels")
        result = separate_labeled(g1, g2, args.max_m, args.shift)
    else:
        W1 = g1.graph if isinstance(g1, LabeledGraph) else g1
        W2 = g2.graph if isinstance(g2, LabeledGraph) else g2
        result = separate(W1, W2, args.max_m, args.shift)
    if not result.separated:
        print(f"NOT-SEPARATED (max_m={args.max_m})")
        return EXIT_NEGATIVE
    print(json.dumps({
        "pattern": pattern_to_json(result.pattern),
        "hom1": result.hom1 if result.exact else float(fmt(result.hom1)),
        "hom2": result.hom2 if result.exact else float(fmt(result.hom2)),
        "exact": result.exact,
    }))
    return EXIT_OK


def cmd_distance(args):
    g1 = graph_from_json(load_json(args.graph1), "graph1")
    g2 = graph_from_json(load_json(args.graph2), "graph2")
    if isinstance(g1, LabeledGraph) and isinstance(g2, LabeledGraph):
        print(fmt(labeled_edit_distance(g1, g2)))
    else:
        W1 = g1.graph if isinstance(g1, LabeledGraph) else g1
        W2 = g2.graph if isinstance(g2, LabeledGraph) else g2
        print(fmt(edit_distance(W1, W2)))
    return EXIT_OK


def cmd_decompose(args):
    pattern = pattern_from_json(load_json(args.pattern))
    td = tree_decomposition(pattern)
    print(json.dumps({
        "width": td.width,
        "bags": [sorted(v + 1 for v in b) for b in td.bags],
        "parent": [p + 1 if p is not None else None for p in td.parent],
    }))
    return EXIT_OK


def cmd_graphon(args):
    if args.action == "density":
        pattern = pattern_from_json(load_json(args.pattern))
        w = graphon_from_json(load_json(args.graphon))
        if args.blocks:
            if not isinstance(pattern, LabeledPattern):
                pattern = LabeledPattern(pattern, len(args.blocks))
            blocks = [b - 1 for b in args.blocks]
            for b in blocks:
                if not 0 <= b < w.q:
                    raise FormatError(f"block {b + 1} outside 1..{w.q}", field="--blocks")
            print(fmt(gph.density_labeled(pattern, w, blocks)))
        else:
            print(fmt(gph.density(pattern, w)))
    elif args.action == "cutnorm":
        print(fmt(gph.cut_norm(graphon_from_json(load_json(args.graphon), signed=True))))
    elif args.action == "cutdist":
        w1 = graphon_from_json(load_json(args.graphon1), "graphon1", signed=True)
        w2 = graphon_from_json(load_json(args.graphon2), "graphon2", signed=True)
        print(fmt(gph.cut_distance(w1, w2)))
        print("note: block-permutation overlay; an upper bound on the cut distance",
              file=sys.stderr)
    elif args.action == "sample":
        w = graphon_from_json(load_json(args.graphon))
        g = gph.sample_graph(w, args.n, args.seed)
        _out(dump_json(graph_to_json(g)) + "\n", args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="homgraph",
        description="Weighted homomorphism numbers, homomorphism models and step graphons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hom", help="homomorphism number of a pattern in a graph")
    p.add_argument("pattern")
    p.add_argument("graph")
    p.add_argument("--shift", type=float, default=0.0, help="add SHIFT*I to the graph")
    p.add_argument("--labeled", action="store_true", help="pin pattern labels to graph labels")
    p.add_argument("--engine", choices=("dp", "brute"), default="dp")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("atlas", help="enumerate patterns up to isomorphism")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--connected", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_atlas)

    def model_opts(p):
        p.add_argument("--max-m", type=int, default=3)
        p.add_argument("--connected", action="store_true")
        p.add_argument("--shift", type=float, default=2.0)
        p.add_argument("--ridge", type=float, default=0.0)
        p.add_argument("--no-intercept", action="store_true")
        p.add_argument("--normalization", choices=("none", "density"), default="none")

    p = sub.add_parser("fit", help="fit a homomorphism model; prints the residual CSV")
    p.add_argument("dataset")
    model_opts(p)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--report", help="write the residual CSV here instead of stdout")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="evaluate a model file on graphs")
    p.add_argument("model")
    p.add_argument("input", help="graph file or dataset/graph array")
    p.add_argument("--output")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("separate", help="find the smallest separating pattern")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("--max-m", type=int, default=3)
    p.add_argument("--shift", type=float, default=2.0)
    p.add_argument("--labeled", action="store_true")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("distance", help="exhaustive (labeled) edit distance")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("decompose", help="minimum-width tree decomposition of a pattern")
    p.add_argument("pattern")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("graphon", help="step-graphon operations")
    gsub = p.add_subparsers(dest="action", required=True)
    q = gsub.add_parser("density")
    q.add_argument("pattern")
    q.add_argument("graphon")
    q.add_argument("--blocks", type=int, nargs="+", help="1-based blocks of the labels")
    q = gsub.add_parser("cutnorm")
    q.add_argument("graphon")
    q = gsub.add_parser("cutdist")
    q.add_argument("graphon1")
    q.add_argument("graphon2")
    q = gsub.add_parser("sample")
    q.add_argument("graphon")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out")
    p.set_defaults(func=cmd_graphon)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
