"""Shared brute-force oracles for the test suite."""

import numpy as np


def brute_force_knn(x, k):
    """O(n^2) reference k-NN: sort by (distance, index) per row."""
    n = x.shape[0]
    out = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        cand = [(np.linalg.norm(x[i] - x[j]), j) for j in range(n) if j != i]
        cand.sort()
        out[i] = [j for _, j in cand[:k]]
    return out


def dense_masked_kernel(x, k, delta):
    """Reference affinity: full kernel matrix masked by the union k-NN pattern."""
    n = x.shape[0]
    nbrs = brute_force_knn(x, k)
    mask = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in nbrs[i]:
            mask[i, j] = mask[j, i] = True
    d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(-1)
    w = np.exp(-d2 / delta**2)
    w[~mask] = 0.0
    np.fill_diagonal(w, 0.0)
    return w


def random_shrink_instance(rng, n_max=40, c_max=4, n_min=6):
    """Pipeline-shaped (F, W) pair: embed random points, graph the rows of F."""
    from shrunkclust.embedding import embedding_similarity, spectral_embed
    from shrunkclust.graph import (build_affinity, estimate_delta, knn_indices,
                                   laplacians)

    n = int(rng.integers(n_min, n_max + 1))
    c = int(rng.integers(1, c_max + 1))
    d = int(rng.integers(2, 5))
    x = rng.standard_normal((n, d))
    if rng.random() < 0.5 and n >= 12:
        # push some structure in so collapse regimes get exercised
        half = n // 2
        x[:half] += 4.0
    k = int(rng.integers(2, min(6, n - 1) + 1))
    g = build_affinity(x, k, estimate_delta(x, knn_indices(x, k)))
    emb = spectral_embed(laplacians(g), c)
    w = embedding_similarity(emb, min(k, n - 1))
    return emb.matrix, w


def naive_objective(g, f, w_dense, gamma):
    """Double-loop recomputation of the shrink objective (unordered pairs)."""
    n = g.shape[0]
    total = sum(np.linalg.norm(g[i] - f[i]) for i in range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if w_dense[i, j] > 0:
                total += gamma * w_dense[i, j] * np.linalg.norm(g[i] - g[j])
    return total
