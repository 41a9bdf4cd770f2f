"""Batch command-line frontend.

Subcommands: synth, ingest, analyze, seed, baselines, simulate. Every run
writes a manifest (resolved config, input digests, seed, timing) next to
its outputs; numeric outputs are plain CSV/JSON.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .centrality import (HiIndexConfig, Measure, degree, hi_index, intensity,
                         pagerank, rank_by_gender, target_hi_index)
from .diffusion import ProbMode, edge_probabilities, estimate_spread
from .graph import (InteractionGraph, InteractionType, load_interactions,
                    filter_inactive, write_graph_csv)
from .plots import plot_ccdf, plot_scaling
from .scores import load_scores
from .seeding import (MarginKind, SeedingConfig, agnostic_seeding,
                      diversity_seeding_baseline, disparity_seed,
                      im_balanced_baseline, invert_omega)
from .stats import (ccdf, glass_ceiling_summary, top_percentile_tests,
                    write_percentile_tests_csv, write_summary_csv)
from .synth import SyntheticGraphParams, generate_synthetic
from .graph import Gender


def _digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _write_manifest(outdir: Path, command: str, config: dict, inputs,
                    master_seed, started: float) -> None:
    manifest = {
        "command": command,
        "config": config,
        "input_digests": {str(p): _digest(p) for p in inputs},
        "master_seed": master_seed,
        "tool_version": __version__,
        "elapsed_seconds": round(time.time() - started, 3),
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2,
                                                     sort_keys=True, default=str))


def _save_archive(g: InteractionGraph, outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    write_graph_csv(g, outdir / "nodes.csv", outdir / "edges.csv")
    meta = {"itype": g.itype.value, "num_nodes": g.num_nodes,
            "num_edges": g.num_edges}
    (outdir / "graph.json").write_text(json.dumps(meta, indent=2))


def _load_archive(path) -> InteractionGraph:
    d = Path(path)
    meta = json.loads((d / "graph.json").read_text())
    return load_interactions(d / "nodes.csv", d / "edges.csv", meta["itype"])


def _seeding_config(args, k_s=None) -> SeedingConfig:
    return SeedingConfig(K=args.k, zeta=args.zeta, error_margin=args.margin,
                         margin_kind=MarginKind.parse(args.margin_kind),
                         K_s=k_s if k_s is not None else args.k_s,
                         num_samples=args.samples, master_seed=args.seed,
                         threads=args.threads)


def cmd_synth(args) -> int:
    started = time.time()
    params = SyntheticGraphParams(
        n=args.n, female_fraction=args.female_fraction,
        homophily=args.homophily, attachment_exponent=args.attachment_exponent,
        mean_intensity=args.mean_intensity, rng_seed=args.seed,
        edges_per_node=args.edges_per_node, reciprocity=args.reciprocity,
        itype=InteractionType.parse(args.type))
    g = generate_synthetic(params)
    outdir = Path(args.out)
    _save_archive(g, outdir)
    _write_manifest(outdir, "synth", vars(args), [], args.seed, started)
    print(f"wrote {g.num_nodes} nodes / {g.num_edges} edges to {outdir}")
    return 0


def cmd_ingest(args) -> int:
    started = time.time()
    g = load_interactions(args.nodes, args.edges, args.type,
                          keep_self_loops=args.keep_self_loops)
    g = filter_inactive(g, args.min_total)
    outdir = Path(args.out)
    _save_archive(g, outdir)
    _write_manifest(outdir, "ingest", vars(args), [args.nodes, args.edges],
                    args.seed, started)
    print(f"wrote {g.num_nodes} nodes / {g.num_edges} edges to {outdir}")
    return 0


def _measure_table(g, name: str, zeta: float, hi_cfg: HiIndexConfig):
    measure = Measure.parse(name)
    if measure is Measure.IN_INTENSITY:
        return intensity(g, "in")
    if measure is Measure.OUT_INTENSITY:
        return intensity(g, "out")
    if measure is Measure.IN_DEGREE:
        return degree(g, "in")
    if measure is Measure.OUT_DEGREE:
        return degree(g, "out")
    if measure is Measure.HI_INDEX:
        return hi_index(g, hi_cfg)
    if measure is Measure.TARGET_HI_INDEX:
        return target_hi_index(g, zeta, hi_cfg)
    if measure is Measure.PAGERANK:
        return pagerank(g)
    raise ValueError(f"measure {name!r} not supported by analyze")


def cmd_analyze(args) -> int:
    started = time.time()
    g = _load_archive(args.graph)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    hi_cfg = HiIndexConfig()
    tables = []
    for name in args.measures:
        table = _measure_table(g, name, args.zeta, hi_cfg)
        tables.append(table)
        slug = table.measure.value
        table.write_tsv(outdir / f"scores_{slug}.tsv")
        curves = []
        for gender in (Gender.FEMALE, Gender.MALE):
            group = g.females() if gender is Gender.FEMALE else g.males()
            if not group:
                continue
            curve = ccdf(table, g, gender)
            curve.write_csv(outdir / f"ccdf_{slug}_{gender.value}.csv")
            curves.append(curve)
        if curves:
            plot_ccdf(curves, slug, outdir / f"ccdf_{slug}.png")
        rows = top_percentile_tests(table, g, args.percentiles) \
            if g.females() and g.males() else []
        write_percentile_tests_csv(rows, outdir / f"utests_{slug}.csv", slug)
    entries = glass_ceiling_summary(g, tables)
    write_summary_csv(entries, outdir / "glass_ceiling_summary.csv")
    _write_manifest(outdir, "analyze", vars(args),
                    [Path(args.graph) / "nodes.csv", Path(args.graph) / "edges.csv"],
                    args.seed, started)
    return 0


def cmd_seed(args) -> int:
    started = time.time()
    g = _load_archive(args.graph)
    mode = ProbMode.parse(args.mode)
    pg = edge_probabilities(g, mode)
    measures = [Measure.parse(m) for m in args.measures]
    for m in measures:
        if m not in (Measure.TARGET_HI_INDEX, Measure.EMBEDDING_INDEX):
            raise ValueError(f"seed pipeline supports target-hi-index and "
                             f"embedding-index, not {m.value}")
    scores = None
    if Measure.EMBEDDING_INDEX in measures:
        if not args.scores_file:
            raise ValueError("--scores-file is required for embedding-index")
        scores = load_scores(args.scores_file, g)
    cfg = _seeding_config(args)
    result = disparity_seed(g, pg, cfg, measures=measures, scores=scores)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "result.json").write_text(
        result.to_json(mode=mode, master_seed=args.seed))
    result.scaling.write_csv(outdir / "scaling.csv")
    inv = invert_omega(result.scaling, cfg.zeta)
    plot_scaling(result.scaling, cfg.zeta, inv.r, outdir / "scaling.png")
    (outdir / "seeds.txt").write_text("\n".join(result.seeds.members) + "\n")
    inputs = [Path(args.graph) / "nodes.csv", Path(args.graph) / "edges.csv"]
    if args.scores_file:
        inputs.append(args.scores_file)
    _write_manifest(outdir, "seed", vars(args), inputs, args.seed, started)
    print(f"measure={result.seeds.measure.value} r={result.seeds.r:.3f} "
          f"s={result.result.s:.4f} spread={result.result.spread:.2f} "
          f"within_margin={result.result.within_margin}")
    return 0


def cmd_baselines(args) -> int:
    started = time.time()
    g = _load_archive(args.graph)
    mode = ProbMode.parse(args.mode)
    pg = edge_probabilities(g, mode)
    cfg = _seeding_config(args)
    which = args.which
    names = ["agnostic", "diversity", "im-balanced"] if which == "all" else [which]
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name in names:
        if name == "agnostic":
            result = agnostic_seeding(g, pg, cfg)
        elif name == "diversity":
            result = diversity_seeding_baseline(g, pg, cfg)
        else:
            result = im_balanced_baseline(g, pg, cfg)
            if "female-influence-constraint-infeasible" in result.result.flags:
                print("warning: im-balanced female-influence constraint "
                      "infeasible", file=sys.stderr)
        (outdir / f"{name}_result.json").write_text(
            result.to_json(mode=mode, master_seed=args.seed))
        print(f"{name}: s={result.result.s:.4f} "
              f"spread={result.result.spread:.2f} "
              f"abs_error={result.result.abs_error:.4f}")
    _write_manifest(outdir, "baselines", vars(args),
                    [Path(args.graph) / "nodes.csv", Path(args.graph) / "edges.csv"],
                    args.seed, started)
    return 0


def cmd_simulate(args) -> int:
    started = time.time()
    g = _load_archive(args.graph)
    pg = edge_probabilities(g, ProbMode.parse(args.mode))
    if args.seeds_file:
        seeds = [line.strip() for line in Path(args.seeds_file).read_text().splitlines()
                 if line.strip()]
    else:
        seeds = [s.strip() for s in args.seed_nodes.split(",") if s.strip()]
    est = estimate_spread(pg, seeds, args.samples, args.seed,
                          threads=args.threads)
    payload = est.to_json(master_seed=args.seed, mode=pg.mode)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "estimate.json").write_text(payload)
        _write_manifest(outdir, "simulate", vars(args),
                        [Path(args.graph) / "nodes.csv",
                         Path(args.graph) / "edges.csv"], args.seed, started)
    print(payload)
    return 0


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--mode", default="literal",
                   choices=["literal", "weighted-cascade"],
                   help="edge probability normalization")
    p.add_argument("--margin-kind", default="relative",
                   choices=["relative", "absolute"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairseed",
        description="Gender-aware network ranking and ratio-targeted "
                    "influence-maximization seeding")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic labeled graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--female-fraction", type=float, default=0.5)
    p.add_argument("--homophily", type=float, default=0.5)
    p.add_argument("--attachment-exponent", type=float, default=1.0)
    p.add_argument("--mean-intensity", type=float, default=3.0)
    p.add_argument("--edges-per-node", type=int, default=4)
    p.add_argument("--reciprocity", type=float, default=0.3)
    p.add_argument("--type", default="like", choices=["like", "comment", "tag"])
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="load interaction CSVs into an archive")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    p.add_argument("--type", default="like", choices=["like", "comment", "tag"])
    p.add_argument("--min-total", type=int, default=2)
    p.add_argument("--keep-self-loops", action="store_true")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="CCDFs, U tests, glass-ceiling grid")
    p.add_argument("--graph", required=True)
    p.add_argument("--measures", nargs="+",
                   default=["in-intensity", "in-degree", "hi-index", "pagerank"])
    p.add_argument("--percentiles", nargs="+", type=float,
                   default=[0.1, 0.01, 0.001])
    p.add_argument("--zeta", type=float, default=0.5,
                   help="target ratio for target-hi-index")
    p.add_argument("--outdir", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("seed", help="run the ratio-targeted seeding pipeline")
    p.add_argument("--graph", required=True)
    p.add_argument("--zeta", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--k-s", type=int, default=20)
    p.add_argument("--measures", nargs="+", default=["target-hi-index"])
    p.add_argument("--margin", type=float, default=0.2)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--scores-file", default=None)
    p.add_argument("--outdir", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_seed)

    p = sub.add_parser("baselines", help="run baseline seeding strategies")
    p.add_argument("--graph", required=True)
    p.add_argument("--zeta", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--k-s", type=int, default=20)
    p.add_argument("--which", default="all",
                   choices=["agnostic", "diversity", "im-balanced", "all"])
    p.add_argument("--margin", type=float, default=0.2)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--outdir", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_baselines)

    p = sub.add_parser("simulate", help="estimate spread for a given seed set")
    p.add_argument("--graph", required=True)
    p.add_argument("--seeds-file", default=None)
    p.add_argument("--seed-nodes", default=None,
                   help="comma-separated node ids")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
