"""Spectral clustering for directed graphs via likelihood estimation.

The package bundles the self-adaptive clustering algorithm (iterative
parameter learning + Hermitian spectral bipartition), generators for
directed stochastic block models, fixed-operator spectral baselines, exact
small-instance search oracles, closed-form theory diagnostics, and a
benchmark CLI (``lesc``).
"""

from .algorithm import (
    LescConfig,
    LescResult,
    LescTrace,
    UnsplittableClusterError,
    estimate_params,
    lesc_bipartition,
    lesc_k,
)
from .baselines import (
    BASELINE_METHODS,
    UnimplementedMethodError,
    baseline_cluster,
)
from .dsbm import DsbmParams, MetaGraph, sample_dsbm2, sample_dsbm_meta
from .eigensolver import EigenConfig, dense_top_eigenpair, top_eigenpair
from .graph import (
    DirectedGraph,
    Labeling,
    build_graph,
    directed_count,
    net_flow,
    read_edge_list,
    read_labels,
    symmetric_normalize,
    total_flow,
    write_edge_list,
    write_labels,
)
from .kmeans import KmeansConfig, kmeans_plane
from .metrics import ari, misclustering_error
from .mle import (
    HermitianOperator,
    MleWeights,
    build_operator,
    clamp_params,
    exhaustive_mle,
    log_likelihood,
    mle_weights,
    quadratic_form,
)
from .theory import (
    PopulationSummary,
    centroid_distance,
    eigengap_delta,
    error_bound,
    l_eta,
    population_matrix,
    population_summary,
)

__version__ = "0.1.0"

__all__ = [
    "DirectedGraph", "Labeling", "build_graph", "total_flow", "net_flow",
    "directed_count", "symmetric_normalize", "read_edge_list",
    "write_edge_list", "read_labels", "write_labels",
    "DsbmParams", "MetaGraph", "sample_dsbm2", "sample_dsbm_meta",
    "MleWeights", "HermitianOperator", "clamp_params", "mle_weights",
    "build_operator", "quadratic_form", "log_likelihood", "exhaustive_mle",
    "EigenConfig", "top_eigenpair", "dense_top_eigenpair",
    "KmeansConfig", "kmeans_plane",
    "LescConfig", "LescResult", "LescTrace", "UnsplittableClusterError",
    "estimate_params", "lesc_bipartition", "lesc_k",
    "BASELINE_METHODS", "UnimplementedMethodError", "baseline_cluster",
    "ari", "misclustering_error",
    "PopulationSummary", "population_matrix", "eigengap_delta",
    "centroid_distance", "l_eta", "error_bound", "population_summary",
]
