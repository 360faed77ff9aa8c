"""Command line front end.

Exit codes: 0 success, 1 usage, 2 I/O (unreadable or malformed input files),
3 validation, 4 non-convergence or divergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

EXIT_USAGE, EXIT_IO, EXIT_VALIDATION, EXIT_CONVERGENCE = 1, 2, 3, 4
LOG_ENV = "NDFGRAPH_LOG_LEVEL"

log = logging.getLogger("ndfgraph")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _set_threads(n: int | None) -> None:
    # BLAS pools read these when numpy is first imported, which happens lazily below
    if n is None:
        return
    if n < 1:
        raise UsageError("--threads must be at least 1")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(n)


def _setup_logging(verbose: int, quiet: bool) -> None:
    level = os.environ.get(LOG_ENV, "WARNING").upper()
    if verbose:
        level = "INFO" if verbose == 1 else "DEBUG"
    if quiet:
        level = "ERROR"
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(message)s")


def _graph(path: str, directed: bool = False):
    from .graph import read_graph

    return read_graph(path, directed)


def _node_index(g, label: str) -> int:
    if g.labels is not None:
        for i, lab in enumerate(g.labels):
            if str(lab) == label:
                return i
        raise UsageError(f"node {label!r} not in graph")
    v = int(label)
    if not 0 <= v < g.n_nodes:
        raise UsageError(f"node {v} out of range")
    return v


def _labels(g) -> list:
    return list(g.labels) if g.labels is not None else list(range(g.n_nodes))


def _out_stream(path):
    return sys.stdout if path in (None, "-") else path


# -- commands ----------------------------------------------------------------------


def cmd_embed(args) -> int:
    from .experiments import build_intervals, parse_intervals_spec
    from .aggregate import p_aggregation
    from .matrix import matrix_table
    from .ndf import dndf_table
    from .persistence import write_features

    g = _graph(args.graph, args.directed)
    direction = args.direction or ("inward" if g.directed else "undirected")
    spec = parse_intervals_spec(args.intervals)
    if args.complementary:
        spec["complementary"] = [int(x) for x in args.complementary.split(",")]
    intervals = build_intervals(spec, g, direction)
    kind = args.kind.upper()
    if kind == "NDF":
        table = dndf_table(g, intervals, direction)
    else:
        table = matrix_table(g, kind, args.order, intervals, direction)
    if args.p is not None:
        table = p_aggregation(table, args.p)
    meta = {
        "graph": args.graph,
        "kind": kind,
        "order": args.order if kind != "NDF" else None,
        "direction": direction,
        "intervals": str(intervals),
        "p": args.p,
        "n_nodes": g.n_nodes,
    }
    write_features(args.output, table, _labels(g), meta)
    log.info("wrote %s features of shape %s", kind, table.shape)
    return 0


def cmd_centrality(args) -> int:
    from .centrality import closeness, p_centrality_all, pagerank
    from .persistence import write_values

    g = _graph(args.graph, args.directed)
    if args.p_centrality is not None:
        values = p_centrality_all(g, args.p_centrality, args.radius, args.scale)
        column = "p_centrality"
    elif args.measure == "closeness":
        values, column = closeness(g), "closeness"
    else:
        values = pagerank(g, args.damping, args.tol, args.max_iter)
        column = "pagerank"
    write_values(_out_stream(args.output), values, _labels(g), column)
    return 0


def cmd_isotest(args) -> int:
    from .equivalence import (
        class_counts,
        color_refinement,
        diameter,
        graphs_ndf_equivalent,
        graphs_rndfc_equivalent,
        graphs_wl_equivalent,
        ndf_partition,
        rndfc_partition,
    )

    g1, g2 = _graph(args.graph1), _graph(args.graph2)
    order = None
    if args.method == "ndf":
        eq = graphs_ndf_equivalent(g1, g2)
        parts = [ndf_partition(g) for g in (g1, g2)]
    elif args.method == "rndfc":
        order = args.order or max(1, diameter(g1), diameter(g2))
        eq = graphs_rndfc_equivalent(g1, g2, order)
        parts = [rndfc_partition(g, order) for g in (g1, g2)]
    else:
        eq = graphs_wl_equivalent(g1, g2)
        parts = [color_refinement(g)[0] for g in (g1, g2)]
    verdict = {
        "equivalent": bool(eq),
        "method": args.method,
        "order": order,
        "class_counts": [class_counts(p) for p in parts],
    }
    print(json.dumps(verdict))
    return 0


def _manifest(path):
    from .experiments import ExperimentManifest

    return ExperimentManifest.load(path)


def cmd_train(args) -> int:
    from .experiments import run_train

    every = max(1, args.log_every)

    def progress(epoch, loss):
        if (epoch + 1) % every == 0:
            log.info("epoch %d loss %.6g", epoch + 1, loss)

    report = run_train(_manifest(args.manifest), progress)
    print(json.dumps({k: report[k] for k in ("final_loss", "train_error", "test_error", "seeds")}))
    return 0


def cmd_predict(args) -> int:
    from .experiments import run_predict

    run_predict(_manifest(args.manifest), _out_stream(args.output), args.graph)
    return 0


def cmd_evaluate(args) -> int:
    if args.predictions or args.targets:
        if not (args.predictions and args.targets) or args.manifest:
            raise UsageError("give either a manifest or both --predictions and --targets")
        from .learn import mean_relative_error
        from .persistence import read_values

        pred, lp = read_values(args.predictions)
        targ, lt = read_values(args.targets)
        if lp != lt:
            raise ValueError("prediction and target files list different nodes")
        err = mean_relative_error(pred, targ)
        print(json.dumps({"mean_relative_error": err, "n_samples": len(pred)}))
        return 0
    if not args.manifest:
        raise UsageError("evaluate needs a manifest or --predictions/--targets")
    from .experiments import run_evaluate

    result = run_evaluate(_manifest(args.manifest), args.graph)
    print(json.dumps({k: result[k] for k in ("mean_relative_error", "split", "n_samples", "seeds")}))
    return 0


def cmd_generate(args) -> int:
    from .graph import dual_barabasi_albert, write_edge_list

    g = dual_barabasi_albert(args.n, args.p, args.m1, args.m2, args.seed)
    write_edge_list(g, args.output, use_labels=False)
    return 0


def cmd_perturb(args) -> int:
    from .graph import perturb_edges, write_edge_list

    g = _graph(args.graph)
    h = perturb_edges(g, args.k, args.seed, args.max_tries)
    write_edge_list(h, args.output, use_labels=h.labels is not None)
    return 0


def cmd_viz(args) -> int:
    from .experiments import build_intervals, parse_intervals_spec
    from .matrix import vndfc
    from .persistence import emit_colormap

    g = _graph(args.graph)
    intervals = build_intervals(parse_intervals_spec(args.intervals), g)
    M = vndfc(g, _node_index(g, args.node), args.order, intervals)
    emit_colormap(M, args.output, args.block)
    return 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ndfgraph", description="NDF embeddings, centralities and learning")
    p.add_argument("--threads", type=int, default=None, help="cap BLAS worker threads")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("-q", "--quiet", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("embed", help="node features to CSV + JSON sidecar")
    s.add_argument("graph")
    s.add_argument("--kind", default="NDFC", help="NDF, NDFC, RNDFC, CDF, RCDF, VNDFC, NDFC_DISCOUNTED")
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--intervals", default="vanilla", help="vanilla | minimal | uniform:m=.. | increasing:m=..,s=..,r=.. | 1,2,4,...")
    s.add_argument("--complementary", default=None, help="extra starting points, e.g. 150,165")
    s.add_argument("--direction", choices=("undirected", "inward", "outward"), default=None)
    s.add_argument("--directed", action="store_true")
    s.add_argument("--p", type=float, default=None, help="p-aggregate the matrices")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("centrality", help="closeness, pagerank or p-centrality CSV")
    s.add_argument("graph")
    s.add_argument("--measure", choices=("closeness", "pagerank"), default="closeness")
    s.add_argument("--p-centrality", type=float, default=None, metavar="P")
    s.add_argument("--radius", type=int, default=5)
    s.add_argument("--scale", type=float, default=1.0)
    s.add_argument("--damping", type=float, default=0.85)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--max-iter", type=int, default=100)
    s.add_argument("--directed", action="store_true")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_centrality)

    s = sub.add_parser("isotest", help="JSON equivalence verdict for two graphs")
    s.add_argument("graph1")
    s.add_argument("graph2")
    s.add_argument("--method", choices=("ndf", "rndfc", "wl"), default="ndf")
    s.add_argument("--order", type=int, default=None)
    s.set_defaults(func=cmd_isotest)

    s = sub.add_parser("train", help="train the model described by a manifest")
    s.add_argument("manifest")
    s.add_argument("--log-every", type=int, default=100)
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("predict", help="predictions CSV from a trained manifest")
    s.add_argument("manifest")
    s.add_argument("--graph", default=None, help="apply the model to another graph")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("evaluate", help="mean relative error")
    s.add_argument("manifest", nargs="?")
    s.add_argument("--graph", default=None)
    s.add_argument("--predictions", default=None)
    s.add_argument("--targets", default=None)
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("generate", help="dual Barabasi-Albert edge list")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--m1", type=int, required=True)
    s.add_argument("--m2", type=int, required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("perturb", help="swap k random edges for k non-edges, staying connected")
    s.add_argument("graph")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--max-tries", type=int, default=100)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_perturb)

    s = sub.add_parser("viz", help="greyscale PPM of a node's VNDFC matrix")
    s.add_argument("graph")
    s.add_argument("--node", required=True, help="node label as written in the edge list")
    s.add_argument("--order", type=int, default=3)
    s.add_argument("--intervals", default="vanilla")
    s.add_argument("--block", type=int, default=16)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_viz)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose, args.quiet)
    try:
        _set_threads(args.threads)
        return args.func(args)
    except UsageError as exc:
        print(f"ndfgraph: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # map library errors onto exit codes
        from .centrality import ConvergenceError
        from .graph import EdgeListError
        from .learn import TrainingDivergedError

        if isinstance(exc, (ConvergenceError, TrainingDivergedError)):
            code = EXIT_CONVERGENCE
        elif isinstance(exc, (OSError, EdgeListError, json.JSONDecodeError)):
            code = EXIT_IO
        elif isinstance(exc, (ValueError, KeyError, TypeError)):
            code = EXIT_VALIDATION
        else:
            raise
        print(f"ndfgraph: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
