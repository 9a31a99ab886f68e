"""Command-line front end: cluster, evaluate, generate, sweep."""

from __future__ import annotations

import argparse
import csv
import logging
import math
import secrets
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .edge_sim import write_edge_scores
from .evaluation import EvaluationReport, weighted_scores
from .graph import load_edge_list, write_edge_list, write_label_map
from .hslc import write_condensed_csv, write_flat
from .pipeline import DEFAULT_MS, METHODS, MS_PRESETS, cluster, summary
from .synth import PlantedConfig, generate, intra_fraction, read_ground_truth, write_ground_truth

log = logging.getLogger("graphslc")

SWEEP_COLUMNS = ("method", "ms", "mu", "overlap", "seed_count", "precision", "recall", "f1",
                 "coverage", "clusters", "max_cluster", "error")


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return repr(round(x, 12)) if math.isfinite(x) else "nan"
    return str(x)


def _resolve_seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(31)
        print(f"seed={args.seed}", file=sys.stderr)
    return args.seed


def _method_params(args) -> dict:
    params = {}
    for flag, key in (("iterations", "iterations"), ("ell", "ell"), ("ensemble", "ensemble"),
                      ("walks", "walks_per_node"), ("walk_len", "walk_len"), ("dim", "d"),
                      ("p", "p"), ("q", "q"), ("samples", "samples")):
        val = getattr(args, flag, None)
        if val is not None:
            params[key] = val
    # SimRank's round count shares the --iterations flag
    if args.method in ("simrank", "lg-simrank") and "iterations" in params:
        params["t"] = params.pop("iterations")
    return params


def _add_method_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ell", type=int, help="RWW walk length")
    p.add_argument("--iterations", type=int, help="SC/RWW reweighting rounds, SimRank rounds")
    p.add_argument("--ensemble", type=int, help="ECG/EECG ensemble size")
    p.add_argument("--walks", type=int, help="node2vec walks per node")
    p.add_argument("--walk-len", type=int, help="node2vec steps per walk")
    p.add_argument("--dim", type=int, help="node2vec dimension")
    p.add_argument("--p", type=float, help="node2vec return parameter")
    p.add_argument("--q", type=float, help="node2vec in-out parameter")
    p.add_argument("--samples", type=int, help="RNBRW walk count (default: edge count)")


def _ms(args) -> int:
    if args.preset:
        node_ms, edge_ms = MS_PRESETS[args.preset]
        return node_ms if args.method in METHODS[:6] else edge_ms
    return args.ms


def cmd_cluster(args) -> int:
    seed = _resolve_seed(args)
    with open(args.input) as fh:
        g = load_edge_list(fh)
    m_s = _ms(args)
    res = cluster(g, args.method, m_s, seed=seed, allow_roots=args.allow_roots, **_method_params(args))
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "clusters.txt", "w") as fh:
        write_flat(res.nodes, g.labels, fh)
    with open(out / "condensed_tree.csv", "w") as fh:
        write_condensed_csv(res.tree, fh)
    with open(out / "node_map.txt", "w") as fh:
        write_label_map(g, fh)
    if args.scores:
        with open(out / "scores.txt", "w") as fh:
            if res.edge_mode:
                write_edge_scores(res.similarity, fh)
            else:
                write_edge_list(res.similarity.as_graph(), fh)
    info = summary(res, g.n)
    text = (f"method={args.method}\nms={m_s}\nseed={seed}\nnodes={g.n}\nedges={g.m}\n"
            f"clusters={info['clusters']}\nmax_cluster={info['max_cluster']}\n"
            f"coverage={_fmt(info['coverage'])}\noutliers={info['outliers']}\n")
    with open(out / "summary.txt", "w") as fh:
        fh.write(text)
    sys.stdout.write(text)
    return 0


def cmd_evaluate(args) -> int:
    with open(args.graph) as fh:
        g = load_edge_list(fh)
    with open(args.truth) as fh:
        truth = read_ground_truth(fh, g)
    with open(args.pred) as fh:
        pred = read_ground_truth(fh, g)
    rep = weighted_scores(pred.labels, truth.labels, g.n)
    text = _report_text(rep)
    sys.stdout.write(text)
    if rep.empty:
        print("warning: empty predicted clustering", file=sys.stderr)
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(text)
        (out / "report.csv").write_text(rep.csv_header() + "\n" + ",".join(
            _fmt(getattr(rep, k)) for k in rep.csv_header().split(",")) + "\n")
    return 0


def _report_text(rep: EvaluationReport) -> str:
    return "".join(f"{k}={_fmt(getattr(rep, k))}\n" for k in
                   ("precision", "recall", "f1", "coverage", "clusters", "max_cluster", "empty"))


def _planted(args, seed: int, mu: float | None = None, overlap: float | None = None) -> PlantedConfig:
    return PlantedConfig(
        n=args.n, mu=args.mu if mu is None else mu, outlier_fraction=args.outliers,
        overlap_fraction=args.overlap if overlap is None else overlap,
        memberships=args.memberships, size_exponent=args.size_exponent,
        min_size=args.min_size, max_size=args.max_size, mean_degree=args.mean_degree, seed=seed)


def cmd_generate(args) -> int:
    seed = _resolve_seed(args)
    g, truth = generate(_planted(args, seed))
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "graph.txt", "w") as fh:
        write_edge_list(g, fh, weights=False)
    with open(out / "truth.txt", "w") as fh:
        write_ground_truth(truth, g.labels, fh)
    print(f"nodes={g.n}\nedges={g.m}\ncommunities={len(truth.labels)}\noutliers={len(truth.outliers)}")
    if args.verify:
        frac = intra_fraction(g, truth)
        print(f"intra_fraction={_fmt(frac)}")
        if args.mu == 0 and args.outliers == 0 and frac < 0.99:
            print("verify failed: intra-community edge fraction below 0.99", file=sys.stderr)
            return 1
    return 0


def _sweep_cell(task):
    method, m_s, mu, overlap, seeds, planted, params = task
    rows = []
    try:
        for s in seeds:
            g, truth = generate(PlantedConfig(**{**planted, "mu": mu, "overlap_fraction": overlap, "seed": s}))
            res = cluster(g, method, m_s, seed=s, **params)
            rows.append(weighted_scores(res.nodes.clusters, truth.labels, g.n))
    except Exception as exc:  # a failing cell must not abort the sweep
        return (method, m_s, mu, overlap, len(seeds)) + (math.nan,) * 6 + (f"{type(exc).__name__}: {exc}",)
    mean = lambda k: float(np.mean([getattr(r, k) for r in rows]))
    return (method, m_s, mu, overlap, len(seeds), mean("precision"), mean("recall"), mean("f1"),
            mean("coverage"), mean("clusters"), mean("max_cluster"), "")


def cmd_sweep(args) -> int:
    seed = _resolve_seed(args)
    mus = [float(x) for x in args.mus.split(",")]
    overlaps = [float(x) for x in args.overlaps.split(",")]
    methods = args.methods.split(",")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    planted = vars(_planted(args, seed))
    seeds = [seed + r for r in range(args.reps)]
    tasks = []
    for method in methods:
        args.method = method
        params = _method_params(args)
        for mu in mus:
            for ov in overlaps:
                tasks.append((method, args.ms, mu, ov, seeds, planted, params))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(t) for t in tasks]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphslc", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a graph given as an edge list")
    p.add_argument("input", help="edge list: 'u v' or 'u v w' per line")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--ms", type=int, default=DEFAULT_MS, help="minimum cluster size")
    p.add_argument("--preset", choices=sorted(MS_PRESETS), help="per-dataset minimum cluster size")
    p.add_argument("--seed", type=int)
    p.add_argument("--allow-roots", action="store_true", help="allow whole components as clusters")
    p.add_argument("--scores", action="store_true", help="also write the similarity scores")
    p.add_argument("--output-dir", default=".")
    _add_method_flags(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("evaluate", help="score a clustering against ground truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_evaluate)

    def planted_flags(p):
        p.add_argument("--n", type=int, default=1000)
        p.add_argument("--mu", type=float, default=0.2)
        p.add_argument("--outliers", type=float, default=0.0)
        p.add_argument("--overlap", type=float, default=0.0)
        p.add_argument("--memberships", type=int, default=2)
        p.add_argument("--size-exponent", type=float, default=1.5)
        p.add_argument("--min-size", type=int, default=20)
        p.add_argument("--max-size", type=int, default=100)
        p.add_argument("--mean-degree", type=float, default=10.0)
        p.add_argument("--seed", type=int)

    p = sub.add_parser("generate", help="planted-partition benchmark graph")
    planted_flags(p)
    p.add_argument("--verify", action="store_true", help="report the intra-community edge fraction")
    p.add_argument("--output-dir", default=".")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sweep", help="mean scores over a grid of generator settings")
    planted_flags(p)
    p.add_argument("--methods", default="ecg")
    p.add_argument("--mus", default="0.2", help="comma-separated mixing values")
    p.add_argument("--overlaps", default="0.0", help="comma-separated overlap fractions")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--ms", type=int, default=DEFAULT_MS)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.add_argument("--method", default=None, help=argparse.SUPPRESS)
    _add_method_flags(p)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Exception as exc:  # any module error becomes a message and exit status 2
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
