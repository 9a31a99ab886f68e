"""Time each method on one planted-partition graph and print its scores."""

import argparse
import time

from graphslc.evaluation import weighted_scores
from graphslc.pipeline import METHODS, cluster
from graphslc.synth import PlantedConfig, generate, intra_fraction

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=2000)
ap.add_argument("--mu", type=float, default=0.2)
ap.add_argument("--outliers", type=float, default=0.1)
ap.add_argument("--overlap", type=float, default=0.0)
ap.add_argument("--ms", type=int, default=15)
ap.add_argument("--seed", type=int, default=1)
ap.add_argument("--methods", default=",".join(METHODS))
args = ap.parse_args()

g, truth = generate(PlantedConfig(n=args.n, mu=args.mu, outlier_fraction=args.outliers,
                                  overlap_fraction=args.overlap, seed=args.seed))
print(g, f"intra={intra_fraction(g, truth):.3f}", f"communities={len(truth.labels)}", flush=True)
for m in args.methods.split(","):
    t = time.perf_counter()
    res = cluster(g, m, args.ms, seed=args.seed)
    rep = weighted_scores(res.nodes.clusters, truth.labels, g.n)
    print(f"{m:10s} {time.perf_counter() - t:7.2f}s p={rep.precision:.3f} r={rep.recall:.3f} "
          f"f1={rep.f1:.3f} cov={rep.coverage:.3f} k={rep.clusters} max={rep.max_cluster}", flush=True)
