"""Multi-view subspace clustering on concatenated features.

The package builds a joint representation from per-view feature
matrices, solves a self-expressive model that separates sample-specific
from view-disagreement corruption (optionally with per-view graph
regularization), and clusters the learned coefficients spectrally.
"""

from .data import (
    JointRepresentation,
    MultiViewDataset,
    concatenate,
    generate_synthetic,
    load_views,
    normalize_view,
)
from .evaluation import (
    ClusteringResult,
    MetricTriple,
    acc,
    build_affinity,
    nmi,
    pairwise_fscore,
    spectral_cluster,
)
from .graph import ViewGraph, build_view_graphs, knn_adjacency, laplacian
from .linalg import col_l21_prox, l21_norm, nuclear_norm, solve_sylvester, svt
from .solver import (
    LrrResult,
    SolverConfig,
    SolverState,
    fcmsc_solve,
    grfcmsc_solve,
    lrr_solve,
    objective_value,
)

__all__ = [
    "JointRepresentation",
    "MultiViewDataset",
    "concatenate",
    "generate_synthetic",
    "load_views",
    "normalize_view",
    "ClusteringResult",
    "MetricTriple",
    "acc",
    "build_affinity",
    "nmi",
    "pairwise_fscore",
    "spectral_cluster",
    "ViewGraph",
    "build_view_graphs",
    "knn_adjacency",
    "laplacian",
    "col_l21_prox",
    "l21_norm",
    "nuclear_norm",
    "solve_sylvester",
    "svt",
    "LrrResult",
    "SolverConfig",
    "SolverState",
    "fcmsc_solve",
    "grfcmsc_solve",
    "lrr_solve",
    "objective_value",
]

__version__ = "0.1.0"
