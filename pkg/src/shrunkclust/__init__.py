"""Graph-shrunk spectral clustering toolkit.

Pipeline: build a Gaussian k-NN affinity graph, embed with the smallest
eigenvectors of the normalized Laplacian, pull neighboring embedded rows
together with an L2,1-regularized reweighted solver, then discretize with
k-means. Baselines (plain/spectral/PCA-reduced k-means) and the usual
clustering metrics are included, plus a batch CLI (``shrunkclust``).
"""

from .embedding import SpectralEmbedding, embedding_similarity, spectral_embed
from .exceptions import (ConvergenceError, DataError, DimensionError,
                         NumericalError, ParameterError, ShrunkClustError)
from .graph import (AffinityGraph, LaplacianSet, build_affinity,
                    connected_components, estimate_delta, knn_indices,
                    laplacians)
from .kernels import BACKEND
from .kmeans import KMeansResult, kmeans_best_of, kmeanspp_init, lloyd
from .linalg import EigenResult, spd_solve, sym_eigs_smallest
from .metrics import acc, contingency, hungarian, nmi
from .pipelines import (PcaProjection, cluster_kmeans, cluster_spectral,
                        cluster_ssc, pca, run_kmeans, run_pca_then,
                        run_spectral, run_ssc)
from .shrink import (ReweightedGraph, ShrinkConfig, ShrunkPatterns,
                     fixed_point_residual, objective, reweight_edges,
                     reweight_rows, smoothed_objective, ssc_solve, ssc_update)

__version__ = "0.1.0"

__all__ = [
    "AffinityGraph", "BACKEND", "ConvergenceError", "DataError",
    "DimensionError", "EigenResult", "KMeansResult", "LaplacianSet",
    "NumericalError", "ParameterError", "PcaProjection", "ReweightedGraph",
    "ShrinkConfig", "ShrunkClustError", "ShrunkPatterns", "SpectralEmbedding",
    "acc", "build_affinity", "cluster_kmeans", "cluster_spectral",
    "cluster_ssc", "connected_components", "contingency", "embedding_similarity",
    "estimate_delta", "fixed_point_residual", "hungarian", "kmeans_best_of",
    "kmeanspp_init", "knn_indices", "laplacians", "lloyd", "nmi", "objective",
    "pca", "reweight_edges", "reweight_rows", "run_kmeans", "run_pca_then",
    "run_spectral", "run_ssc", "smoothed_objective", "spd_solve",
    "spectral_embed", "ssc_solve", "ssc_update", "sym_eigs_smallest",
]
