"""k-NN affinity graphs with Gaussian weights and their Laplacians.

Edges are stored once as (i, j) pairs with i < j; symmetry is implicit.
The neighborhood rule is the union form: an edge exists when either
endpoint lists the other among its k nearest rows.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import kernels
from .exceptions import ParameterError

_KNN_CHUNK = 512


class DegenerateDataWarning(UserWarning):
    """All pairwise distances vanished; a fallback bandwidth was used."""


@dataclass
class AffinityGraph:
    """Sparse symmetric nonnegative weights over n vertices.

    rows/cols/weights list each undirected edge once (rows < cols);
    ``k`` and ``delta`` record how the graph was built.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    k: int
    delta: float
    _csr: sp.csr_matrix = field(default=None, repr=False, compare=False)

    def matrix(self):
        """Symmetric CSR form (built lazily, cached)."""
        if self._csr is None:
            ij = np.concatenate([self.rows, self.cols])
            ji = np.concatenate([self.cols, self.rows])
            vv = np.concatenate([self.weights, self.weights])
            self._csr = sp.csr_matrix((vv, (ij, ji)), shape=(self.n, self.n))
        return self._csr

    def degrees(self):
        d = np.zeros(self.n)
        np.add.at(d, self.rows, self.weights)
        np.add.at(d, self.cols, self.weights)
        return d

    @property
    def n_edges(self):
        return len(self.weights)


@dataclass(frozen=True)
class LaplacianSet:
    """Degree vector D, combinatorial Laplacian L and normalized L_n."""

    degree: np.ndarray
    laplacian: sp.csr_matrix
    normalized: sp.csr_matrix


def _check_data_matrix(x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ParameterError(f"expected a 2-d sample matrix, got ndim={x.ndim}")
    if not np.all(np.isfinite(x)):
        raise ParameterError("sample matrix contains non-finite values")
    return np.ascontiguousarray(x)


def _sq_dist_block(block, x, sq_norms, block_sq):
    d2 = block_sq[:, None] - 2.0 * (block @ x.T) + sq_norms[None, :]
    np.maximum(d2, 0.0, out=d2)
    return d2


def knn_indices(x, k):
    """For each row, the k nearest other rows (Euclidean, ties by index)."""
    x = _check_data_matrix(x)
    n = x.shape[0]
    if not 1 <= k < n:
        raise ParameterError(f"k must satisfy 1 <= k < n, got k={k}, n={n}")
    sq_norms = np.einsum("ij,ij->i", x, x)
    out = np.empty((n, k), dtype=np.int64)
    for start in range(0, n, _KNN_CHUNK):
        stop = min(n, start + _KNN_CHUNK)
        d2 = _sq_dist_block(x[start:stop], x, sq_norms, sq_norms[start:stop])
        out[start:stop] = kernels.knn_select(d2, k, row_offset=start)
    return out


def estimate_delta(x, neighbors):
    """Mean distance to the k-th nearest neighbor; 1.0 if all points coincide."""
    x = _check_data_matrix(x)
    neighbors = np.asarray(neighbors)
    if neighbors.size == 0:
        raise ParameterError("neighbor lists are empty")
    diffs = x[:, None, :] - x[neighbors]
    kth = np.sqrt(np.einsum("ijk,ijk->ij", diffs, diffs)).max(axis=1)
    delta = float(kth.mean())
    if delta <= 0.0:
        warnings.warn("all pairwise distances are zero; using delta = 1",
                      DegenerateDataWarning)
        return 1.0
    return delta


def build_affinity(x, k, delta):
    """Gaussian-kernel weights exp(-d^2/delta^2) on the union k-NN pattern."""
    x = _check_data_matrix(x)
    if delta <= 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    n = x.shape[0]
    nbrs = knn_indices(x, k)
    src = np.repeat(np.arange(n, dtype=np.int64), k)
    dst = nbrs.ravel()
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    pairs = np.unique(np.stack([lo, hi], axis=1), axis=0)
    rows, cols = pairs[:, 0], pairs[:, 1]
    d = x[rows] - x[cols]
    d2 = np.einsum("ij,ij->i", d, d)
    w = np.exp(-d2 / (delta * delta))
    keep = w > 0.0  # drop weights that underflowed to zero
    return AffinityGraph(n=n, rows=rows[keep], cols=cols[keep],
                         weights=w[keep], k=int(k), delta=float(delta))


def laplacians(graph):
    """D, L = D - A, and L_n = I - D^{-1/2} A D^{-1/2}.

    Zero-degree vertices use the convention D^{-1/2}_ii = 0, which leaves
    an identity row/column in L_n.
    """
    n = graph.n
    a = graph.matrix()
    deg = graph.degrees()
    lap = sp.csr_matrix(sp.diags(deg) - a)
    dmh = np.zeros(n)
    pos = deg > 0
    dmh[pos] = 1.0 / np.sqrt(deg[pos])
    norm_adj = sp.diags(dmh) @ a @ sp.diags(dmh)
    normalized = sp.csr_matrix(sp.eye(n) - norm_adj)
    return LaplacianSet(degree=deg, laplacian=lap, normalized=normalized)


def connected_components(graph):
    """Component label per vertex, from the edge list (union-find)."""
    parent = np.arange(graph.n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in zip(graph.rows, graph.cols):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(graph.n)])
    _, labels = np.unique(roots, return_inverse=True)
    return labels
