"""Mean F1 of each method as the mixing parameter grows.

Prints one row per mixing value and one column per method, averaged over
``--reps`` graphs. Failed runs count as missing.

    python3 scripts/mixing_curve.py --mus 0.1,0.3,0.5,0.7 --reps 5
"""

import argparse

import numpy as np

from graphslc.evaluation import weighted_scores
from graphslc.node_sim import DegenerateError
from graphslc.pipeline import NODE_METHODS, cluster
from graphslc.synth import PlantedConfig, generate

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=2000)
ap.add_argument("--mus", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7")
ap.add_argument("--outliers", type=float, default=0.1)
ap.add_argument("--ms", type=int, default=15)
ap.add_argument("--reps", type=int, default=5)
ap.add_argument("--methods", default=",".join(NODE_METHODS))
args = ap.parse_args()

methods = args.methods.split(",")
print("mu    " + " ".join(f"{m:>10s}" for m in methods))
for mu in map(float, args.mus.split(",")):
    f1 = {m: [] for m in methods}
    for seed in range(args.reps):
        g, truth = generate(PlantedConfig(n=args.n, mu=mu, outlier_fraction=args.outliers, seed=seed))
        for m in methods:
            try:
                res = cluster(g, m, args.ms, seed=seed)
            except DegenerateError:
                continue
            f1[m].append(weighted_scores(res.nodes.clusters, truth.labels, g.n).f1)
    print(f"{mu:<5.2f} " + " ".join(f"{np.mean(f1[m]) if f1[m] else float('nan'):10.3f}" for m in methods),
          flush=True)
