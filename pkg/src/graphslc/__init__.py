"""Graph clustering with hierarchical single-linkage over node and edge similarities."""

from .evaluation import EvaluationReport, coverage, weighted_scores
from .graph import Graph, GraphParseError, LineGraph, build_line_graph, load_edge_list
from .hslc import (CondensedTree, FlatClustering, MergeForest, SimilarityGraph, build_merge_forest,
                   condense, hslc, persistence, project_edge_clusters, select_flat)
from .pipeline import METHODS, cluster, similarity
from .synth import GroundTruth, PlantedConfig, generate

__version__ = "0.1.0"
