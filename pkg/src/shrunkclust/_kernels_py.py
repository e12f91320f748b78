"""NumPy fallback for the compiled inner-loop kernels.

Mirrors the signatures in ``_kernels.pyx`` exactly; selected by
``shrunkclust.kernels`` when the extension is unavailable or when
``SHRUNKCLUST_PURE_PYTHON=1`` is set.
"""

import numpy as np


def row_norms(a):
    """Euclidean norm of every row of a 2-d array."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    return np.sqrt(np.einsum("ij,ij->i", a, a))


def edge_norms(g, rows, cols):
    """Euclidean distance between row pairs (rows[e], cols[e]) of g."""
    d = g[rows] - g[cols]
    return np.sqrt(np.einsum("ij,ij->i", d, d))


def shrink_operator(g, f, s, rows, cols, wt, gamma, out):
    """Accumulate S(G-F) + gamma * Ltilde G into out, edge by edge.

    Evaluating the Laplacian term as w~_ij (g_i - g_j) keeps the result
    accurate when the reweighted edges are orders of magnitude stiffer
    than the row weights (assembling Ltilde and multiplying cancels
    catastrophically in that regime).
    """
    out[:] = s[:, None] * (g - f)
    d = wt[:, None] * (g[rows] - g[cols])
    np.add.at(out, rows, gamma * d)
    np.add.at(out, cols, -gamma * d)
    return out


def knn_select(d2, k, row_offset):
    """Per-row indices of the k smallest entries of a squared-distance block.

    ``d2`` holds distances from rows [row_offset, row_offset + b) to all n
    points; entry (i, row_offset + i) is the self-distance and is skipped.
    Ties are broken toward the lower column index.
    """
    b, n = d2.shape
    out = np.empty((b, k), dtype=np.int64)
    masked = d2.copy()
    masked[np.arange(b), row_offset + np.arange(b)] = np.inf
    # stable sort keeps the lower index first among equal distances
    order = np.argsort(masked, axis=1, kind="stable")
    out[:] = order[:, :k]
    return out


def lloyd_iter(x, centers, labels_out, centers_out, counts_out):
    """One fused Lloyd sweep: assign points, accumulate new centers.

    Returns the inertia of the assignment against the input centers.
    Assignment ties go to the lowest center index. ``centers_out`` rows for
    empty clusters are left at zero with ``counts_out`` zero; the caller
    decides the repair policy.
    """
    n = x.shape[0]
    c = centers.shape[0]
    # chunked ||x - c||^2 to bound temporary memory at large n
    inertia = 0.0
    chunk = max(1, min(n, 8192 // max(1, c) * 8))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        d2 = (
            np.einsum("ij,ij->i", x[start:stop], x[start:stop])[:, None]
            - 2.0 * x[start:stop] @ centers.T
            + np.einsum("ij,ij->i", centers, centers)[None, :]
        )
        lab = np.argmin(d2, axis=1)
        labels_out[start:stop] = lab
        inertia += np.maximum(d2[np.arange(stop - start), lab], 0.0).sum()
    centers_out[:] = 0.0
    counts_out[:] = np.bincount(labels_out, minlength=c)
    np.add.at(centers_out, labels_out, x)
    return float(inertia)


def min_sq_dist_update(x, center, min_d2):
    """min_d2[i] = min(min_d2[i], ||x_i - center||^2), in place."""
    d = x - center[None, :]
    np.minimum(min_d2, np.einsum("ij,ij->i", d, d), out=min_d2)
    return min_d2
