"""Spectral embeddings from the normalized Laplacian, and the similarity
graph rebuilt on the embedded rows."""

from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError
from .graph import build_affinity, estimate_delta, knn_indices
from .linalg import sym_eigs_smallest


@dataclass(frozen=True)
class SpectralEmbedding:
    """n x c matrix of the c smallest normalized-Laplacian eigenvectors."""

    matrix: np.ndarray
    eigenvalues: np.ndarray


def spectral_embed(laplacian_set, c, tol=1e-9):
    """Columns are the c smallest eigenvectors of L_n; rows embed the samples."""
    ln = laplacian_set.normalized
    n = ln.shape[0]
    if not 1 <= c <= n:
        raise ParameterError(f"c must satisfy 1 <= c <= n, got c={c}, n={n}")
    res = sym_eigs_smallest(ln, c, tol=tol)
    return SpectralEmbedding(matrix=res.eigenvectors, eigenvalues=res.eigenvalues)


def embedding_similarity(embedding, k):
    """Gaussian k-NN affinity over the embedded rows.

    The bandwidth is re-estimated in embedding space (mean k-th-neighbor
    distance of the rows of F), not reused from the input space.
    """
    f = embedding.matrix if isinstance(embedding, SpectralEmbedding) else np.asarray(embedding)
    nbrs = knn_indices(f, k)
    delta = estimate_delta(f, nbrs)
    return build_affinity(f, k, delta)
