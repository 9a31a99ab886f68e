"""Cluster the college football network with several methods over many seeds.

Needs the public ``football.gml`` (nodes carry a ``value`` conference id).
Teams of the independent conference are treated as outliers.

    python3 scripts/football.py path/to/football.gml --seeds 11
"""

import argparse

import networkx as nx
import numpy as np

from graphslc.evaluation import weighted_scores
from graphslc.graph import Graph
from graphslc.pipeline import cluster

ap = argparse.ArgumentParser()
ap.add_argument("gml")
ap.add_argument("--methods", default="n2v,ecg,rww,sc,lc,eecg")
ap.add_argument("--ms", type=int, default=5)
ap.add_argument("--seeds", type=int, default=11)
ap.add_argument("--independent", type=int, default=5, help="conference id of the independent teams")
args = ap.parse_args()

nxg = nx.read_gml(args.gml, label="id")
nodes = sorted(nxg.nodes())
index = {v: i for i, v in enumerate(nodes)}
g = Graph.from_edges(len(nodes), [(index[a], index[b]) for a, b in nxg.edges()],
                     labels=np.array(nodes, dtype=np.int64))
conf = {}
for v in nodes:
    c = int(nxg.nodes[v]["value"])
    if c != args.independent:
        conf.setdefault(c, []).append(index[v])
labels = list(conf.values())
print(g, f"conferences={len(labels)}")

for m in args.methods.split(","):
    reps = [weighted_scores(cluster(g, m, args.ms, seed=s).nodes.clusters, labels, g.n)
            for s in range(args.seeds)]
    med = {k: np.median([getattr(r, k) for r in reps]) for k in ("precision", "recall", "f1", "coverage", "clusters")}
    print(f"{m:8s} p={med['precision']:.3f} r={med['recall']:.3f} f1={med['f1']:.3f} "
          f"cov={med['coverage']:.3f} k={med['clusters']:g}  (medians over {args.seeds} seeds)")
