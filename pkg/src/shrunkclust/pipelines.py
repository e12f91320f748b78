"""End-to-end clustering pipelines: k-means on raw data, spectral
clustering, the shrunk-pattern variant, and PCA-reduced versions."""

from dataclasses import dataclass

import numpy as np

from .embedding import embedding_similarity, spectral_embed
from .exceptions import ParameterError
from .graph import build_affinity, estimate_delta, knn_indices, laplacians
from .kmeans import kmeans_best_of
from .linalg import sym_eigs_smallest
from .metrics import acc
from .shrink import ShrinkConfig, ShrunkPatterns, ssc_solve

PCA_DIM_GRID = (10, 25, 50, 100, 150)


@dataclass(frozen=True)
class PcaProjection:
    mean: np.ndarray
    components: np.ndarray  # d x m, orthonormal columns
    projected: np.ndarray   # n x m


@dataclass
class PipelineResult:
    labels: np.ndarray
    inertia: float
    iterations: int
    shrunk: ShrunkPatterns | None = None
    pca_dim: int | None = None


def pca(x, m):
    """Project onto the top-m sample-covariance eigenvectors.

    Routed through the symmetric eigensolver on the negated covariance, so
    component signs follow the same deterministic convention as everything
    else.
    """
    x = np.asarray(x, dtype=np.float64)
    n, d = x.shape
    if not 1 <= m <= min(n, d):
        raise ParameterError(f"need 1 <= m <= min(n, d) = {min(n, d)}, got {m}")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / max(1, n - 1)
    res = sym_eigs_smallest(-cov, m)
    components = res.eigenvectors
    return PcaProjection(mean=mean, components=components,
                         projected=centered @ components)


def spectral_pipeline(x, c, k):
    """Affinity graph -> normalized Laplacian -> c-dimensional embedding."""
    nbrs = knn_indices(x, k)
    delta = estimate_delta(x, nbrs)
    affinity = build_affinity(x, k, delta)
    lset = laplacians(affinity)
    return spectral_embed(lset, c)


def run_kmeans(x, c, restarts=50, seed=0):
    res = kmeans_best_of(x, c, restarts=restarts, seed=seed)
    return PipelineResult(labels=res.labels, inertia=res.inertia,
                          iterations=res.iterations)


def run_spectral(x, c, k=5, restarts=50, seed=0):
    emb = spectral_pipeline(x, c, k)
    res = kmeans_best_of(emb.matrix, c, restarts=restarts, seed=seed)
    return PipelineResult(labels=res.labels, inertia=res.inertia,
                          iterations=res.iterations)


def run_ssc(x, c, k=5, cfg=None, restarts=50, seed=0):
    """Embed, rebuild the similarity graph on the embedded rows, shrink,
    then k-means on the shrunk patterns."""
    if cfg is None:
        cfg = ShrinkConfig(gamma=1.0)
    emb = spectral_pipeline(x, c, k)
    w = embedding_similarity(emb, k)
    shrunk = ssc_solve(emb.matrix, w, cfg)
    res = kmeans_best_of(shrunk.g, c, restarts=restarts, seed=seed)
    return PipelineResult(labels=res.labels, inertia=res.inertia,
                          iterations=shrunk.iterations, shrunk=shrunk)


def run_pca_then(inner, x, c, k=5, restarts=50, seed=0, truth=None,
                 dim_grid=PCA_DIM_GRID):
    """PCA sweep wrapper around k-means or spectral clustering.

    Tries each admissible projection width; keeps the best accuracy when
    ground truth is available, otherwise the lowest k-means inertia.
    """
    x = np.asarray(x, dtype=np.float64)
    dims = [m for m in dim_grid if m <= min(x.shape)]
    if not dims:
        dims = [min(x.shape)]
    best = None
    best_key = None
    for m in dims:
        projected = pca(x, m).projected
        if inner == "kmeans":
            res = run_kmeans(projected, c, restarts=restarts, seed=seed)
        elif inner == "spectral":
            res = run_spectral(projected, c, k=k, restarts=restarts, seed=seed)
        else:
            raise ParameterError(f"unknown inner method {inner!r}")
        key = -acc(res.labels, truth) if truth is not None else res.inertia
        if best is None or key < best_key:
            best, best_key = res, key
            best.pca_dim = m
    return best


# spec-shaped thin wrappers -------------------------------------------------

def cluster_kmeans(x, c, restarts=50, seed=0):
    """Plain k-means labels (best of restarts)."""
    return run_kmeans(x, c, restarts=restarts, seed=seed).labels


def cluster_spectral(x, c, k=5, restarts=50, seed=0):
    """Classical spectral clustering labels."""
    return run_spectral(x, c, k=k, restarts=restarts, seed=seed).labels


def cluster_ssc(x, c, k=5, cfg=None, restarts=50, seed=0):
    """Shrunk-pattern clustering; returns (labels, ShrunkPatterns)."""
    res = run_ssc(x, c, k=k, cfg=cfg, restarts=restarts, seed=seed)
    return res.labels, res.shrunk
