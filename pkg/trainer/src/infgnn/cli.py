"""Command-line frontend: train scores or verify gradients.

Graph input is either --graph (a directory holding nodes.csv and
edges.csv) or explicit --nodes/--edges paths.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import parse_config
from .data import default_features, load_features, load_graph
from .train import export_scores, gradient_check, train


def _resolve_inputs(args):
    if args.graph:
        d = Path(args.graph)
        return d / "nodes.csv", d / "edges.csv"
    if not (args.nodes and args.edges):
        raise ValueError("provide --graph or both --nodes and --edges")
    return Path(args.nodes), Path(args.edges)


def _load(args):
    nodes, edges = _resolve_inputs(args)
    g = load_graph(nodes, edges)
    features = (load_features(args.features, g) if args.features
                else default_features(g))
    params = parse_config(args.config, args.set or ())
    return g, features, params


def cmd_train(args) -> int:
    g, features, params = _load(args)
    result = train(g, features, params)
    export_scores(result.scores, args.out)
    first = result.losses[0] if result.losses else float("nan")
    print(f"trained {g.num_nodes} nodes for {params.epochs} epochs: "
          f"loss {first:.4f} -> {result.final_loss:.4f}; wrote {args.out}")
    return 0


def cmd_gradcheck(args) -> int:
    g, features, params = _load(args)
    err = gradient_check(g, features, params, num_probes=args.probes)
    print(f"max relative gradient error over {args.probes} probes: {err:.3e}")
    return 0 if err < args.tolerance else 1


def _add_inputs(p):
    p.add_argument("--graph", default=None,
                   help="directory containing nodes.csv and edges.csv")
    p.add_argument("--nodes", default=None)
    p.add_argument("--edges", default=None)
    p.add_argument("--features", default=None,
                   help="optional id,f1,f2,... feature CSV")
    p.add_argument("--config", default=None,
                   help="flat key=value hyperparameter file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="hyperparameter override (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infgnn",
        description="Train per-node influence scores with an attention GNN")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train and export the score TSV")
    _add_inputs(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("gradcheck",
                       help="compare autograd with finite differences")
    _add_inputs(p)
    p.add_argument("--probes", type=int, default=50)
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.set_defaults(func=cmd_gradcheck)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
