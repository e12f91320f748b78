"""Backend selection for the inner-loop kernels.

The compiled extension is preferred; the NumPy implementation is used when
the extension was not built or when ``SHRUNKCLUST_PURE_PYTHON=1`` is set.
``BACKEND`` names the active choice ("compiled" or "python").
"""

import os

import numpy as np

if os.environ.get("SHRUNKCLUST_PURE_PYTHON", "0") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"


def _c2d(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _idx(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def row_norms(a):
    """Euclidean norms of the rows of ``a`` (n,) for an (n, m) array."""
    return np.asarray(_impl.row_norms(_c2d(a)))


def edge_norms(g, rows, cols):
    """Distances ||g[rows[e]] - g[cols[e]]|| for every edge e."""
    return np.asarray(_impl.edge_norms(_c2d(g), _idx(rows), _idx(cols)))


def shrink_operator(g, f, s, rows, cols, wt, gamma):
    """Edgewise evaluation of S(G - F) + gamma * Ltilde(wt) G."""
    g = _c2d(g)
    out = np.empty_like(g)
    _impl.shrink_operator(g, _c2d(f), _c2d(s), _idx(rows), _idx(cols),
                          _c2d(wt), float(gamma), out)
    return out


def knn_select(d2, k, row_offset=0):
    """Indices of the k nearest columns per row of a distance block.

    The self column ``row_offset + i`` is excluded; ties break toward the
    lower column index.
    """
    return np.asarray(_impl.knn_select(_c2d(d2), int(k), int(row_offset)))


def lloyd_iter(x, centers):
    """One Lloyd sweep.

    Returns (labels, sums, counts, inertia) where ``sums`` holds per-cluster
    coordinate sums (not yet divided by counts) and ``inertia`` is measured
    against the input centers.
    """
    x = _c2d(x)
    centers = _c2d(centers)
    n = x.shape[0]
    c = centers.shape[0]
    labels = np.empty(n, dtype=np.int64)
    sums = np.empty((c, x.shape[1]), dtype=np.float64)
    counts = np.empty(c, dtype=np.int64)
    inertia = _impl.lloyd_iter(x, centers, labels, sums, counts)
    return labels, sums, counts, float(inertia)


def min_sq_dist_update(x, center, min_d2):
    """In-place min of ``min_d2`` with squared distances to ``center``."""
    _impl.min_sq_dist_update(_c2d(x), _c2d(center), min_d2)
    return min_d2
