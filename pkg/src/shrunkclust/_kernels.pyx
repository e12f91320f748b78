# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled inner-loop kernels.

Hot paths only: per-row norms, per-edge norms, the edgewise shrink
operator, k-NN selection from a distance block, one fused Lloyd sweep
and the k-means++ distance update.  ``_kernels_py`` provides the NumPy
fallback with identical signatures.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def row_norms(double[:, ::1] a):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1], i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double acc
    for i in range(n):
        acc = 0.0
        for j in range(m):
            acc += a[i, j] * a[i, j]
        out[i] = sqrt(acc)
    return out


def edge_norms(double[:, ::1] g, long long[::1] rows, long long[::1] cols):
    cdef Py_ssize_t ne = rows.shape[0], m = g.shape[1], e, j
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(ne, dtype=np.float64)
    cdef double acc, d
    cdef Py_ssize_t r, c
    for e in range(ne):
        r = rows[e]
        c = cols[e]
        acc = 0.0
        for j in range(m):
            d = g[r, j] - g[c, j]
            acc += d * d
        out[e] = sqrt(acc)
    return out


def shrink_operator(double[:, ::1] g, double[:, ::1] f, double[::1] s,
                    long long[::1] rows, long long[::1] cols,
                    double[::1] wt, double gamma, double[:, ::1] out):
    # S(G-F) + gamma * sum_j w~_ij (g_i - g_j); the difference is formed
    # before the (possibly huge) edge weight touches it, so stiff floored
    # edges do not wipe out the small residual entries.
    cdef Py_ssize_t n = g.shape[0], m = g.shape[1], ne = rows.shape[0], i, j, e
    cdef Py_ssize_t r, c
    cdef double d
    for i in range(n):
        for j in range(m):
            out[i, j] = s[i] * (g[i, j] - f[i, j])
    for e in range(ne):
        r = rows[e]
        c = cols[e]
        for j in range(m):
            d = gamma * wt[e] * (g[r, j] - g[c, j])
            out[r, j] += d
            out[c, j] -= d
    return np.asarray(out)


def knn_select(double[:, ::1] d2, long long k, long long row_offset):
    # k smallest entries per row, self column skipped, ties to lower index.
    cdef Py_ssize_t b = d2.shape[0], n = d2.shape[1], i, j, p, q
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((b, k), dtype=np.int64)
    cdef long long[:, ::1] ov = out
    cdef double[::1] best_d = np.empty(k, dtype=np.float64)
    cdef long long[::1] best_j = np.empty(k, dtype=np.int64)
    cdef Py_ssize_t filled
    cdef double v
    for i in range(b):
        filled = 0
        for j in range(n):
            if j == row_offset + i:
                continue
            v = d2[i, j]
            if filled == k and v >= best_d[k - 1]:
                continue
            # insertion position: strictly smaller values first, equal
            # values keep the earlier (lower) index in front
            p = filled if filled < k else k - 1
            while p > 0 and best_d[p - 1] > v:
                if p < k:
                    best_d[p] = best_d[p - 1]
                    best_j[p] = best_j[p - 1]
                p -= 1
            best_d[p] = v
            best_j[p] = j
            if filled < k:
                filled += 1
        for q in range(k):
            ov[i, q] = best_j[q]
    return out


def lloyd_iter(double[:, ::1] x, double[:, ::1] centers,
               long long[::1] labels_out, double[:, ::1] centers_out,
               long long[::1] counts_out):
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1], c = centers.shape[0]
    cdef Py_ssize_t i, j, q, best
    cdef double acc, d, best_d, inertia = 0.0
    for q in range(c):
        counts_out[q] = 0
        for j in range(m):
            centers_out[q, j] = 0.0
    for i in range(n):
        best = 0
        best_d = 0.0
        for q in range(c):
            acc = 0.0
            for j in range(m):
                d = x[i, j] - centers[q, j]
                acc += d * d
            if q == 0 or acc < best_d:
                best_d = acc
                best = q
        labels_out[i] = best
        counts_out[best] += 1
        inertia += best_d
        for j in range(m):
            centers_out[best, j] += x[i, j]
    return inertia


def min_sq_dist_update(double[:, ::1] x, double[::1] center, double[::1] min_d2):
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1], i, j
    cdef double acc, d
    for i in range(n):
        acc = 0.0
        for j in range(m):
            d = x[i, j] - center[j]
            acc += d * d
        if acc < min_d2[i]:
            min_d2[i] = acc
    return np.asarray(min_d2)
