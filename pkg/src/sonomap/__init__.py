"""sonomap: coordinated texture/onomatopoeia maps over a self-contained
UMAP pipeline, with deterministic mock generative providers."""

from .errors import (
    AtlasValidationError,
    CurveFitError,
    ProviderError,
    ProviderTimeoutError,
    SonomapError,
)
from .fuzzy import FuzzyGraph, build_fuzzy_graph, calibrate_smooth_knn
from .layout import find_ab_params, initialize_layout, optimize_layout
from .metrics import trustworthiness
from .neighbors import (
    KnnGraph,
    build_knn_graph,
    cosine_distance,
    euclidean_distance,
    knn_exact,
    pairwise_distances,
)
from .params import UmapParams
from .projection import (
    MODALITY_DIMS,
    EmbeddingVector,
    UmapModel,
    umap_fit,
    umap_transform,
)
from .rng import SplitMix64, hash64, mix64

__version__ = "0.1.0"

__all__ = [
    "AtlasValidationError",
    "CurveFitError",
    "EmbeddingVector",
    "FuzzyGraph",
    "KnnGraph",
    "MODALITY_DIMS",
    "ProviderError",
    "ProviderTimeoutError",
    "SonomapError",
    "SplitMix64",
    "UmapModel",
    "UmapParams",
    "build_fuzzy_graph",
    "build_knn_graph",
    "calibrate_smooth_knn",
    "cosine_distance",
    "euclidean_distance",
    "find_ab_params",
    "hash64",
    "initialize_layout",
    "knn_exact",
    "mix64",
    "optimize_layout",
    "pairwise_distances",
    "trustworthiness",
    "umap_fit",
    "umap_transform",
    "__version__",
]
