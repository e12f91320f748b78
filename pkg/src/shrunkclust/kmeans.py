"""Seeded k-means: ++ initialization, Lloyd sweeps, best-of-restarts.

Everything is deterministic given the seed. Assignment ties go to the
lowest center index and empty clusters are repaired by promoting the point
farthest from its current center to a singleton center.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import ParameterError


@dataclass(frozen=True)
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    iterations: int


def kmeanspp_init(x, c, seed):
    """k-means++ seeding: next center drawn with probability ~ min d^2.

    When every remaining candidate is at distance zero (duplicate or
    constant data) the lowest-index row not yet chosen is taken, so
    c == n always yields a permutation of the rows.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    if not 1 <= c <= n:
        raise ParameterError(f"need 1 <= c <= n, got c={c}, n={n}")
    rng = np.random.default_rng(seed)
    centers = np.empty((c, x.shape[1]))
    chosen = np.zeros(n, dtype=bool)
    first = int(rng.integers(n))
    centers[0] = x[first]
    chosen[first] = True
    min_d2 = np.full(n, np.inf)
    for q in range(1, c):
        kernels.min_sq_dist_update(x, centers[q - 1], min_d2)
        total = float(min_d2.sum())
        if total > 0:
            target = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(min_d2), target, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(np.argmin(chosen))  # first unchosen row
        centers[q] = x[idx]
        chosen[idx] = True
    return centers


def _exact_inertia(x, centers, labels):
    d = x - centers[labels]
    return float(np.einsum("ij,ij->", d, d))


def lloyd(x, centers, max_iter=300, tol=1e-12):
    """Alternate assignment and mean updates until labels stabilize.

    Stops when assignments repeat, the relative inertia change drops below
    tol, or max_iter is reached. The reported inertia is recomputed exactly
    against the final centers and labels.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    centers = np.array(centers, dtype=np.float64)
    c = centers.shape[0]
    if c > x.shape[0]:
        raise ParameterError("more centers than points")
    prev_labels = None
    prev_inertia = np.inf
    labels = np.zeros(x.shape[0], dtype=np.int64)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        labels, sums, counts, inertia = kernels.lloyd_iter(x, centers)
        assert inertia <= prev_inertia * (1 + 1e-12) + 1e-12
        empty = np.nonzero(counts == 0)[0]
        if len(empty):
            d = x - centers[labels]
            cost = np.einsum("ij,ij->i", d, d)
            for q in empty:
                # only steal from clusters that keep at least one point
                cand = np.nonzero(counts[labels] > 1)[0]
                far = int(cand[np.argmax(cost[cand])])
                old = labels[far]
                sums[old] -= x[far]
                counts[old] -= 1
                labels[far] = q
                sums[q] = x[far]
                counts[q] = 1
                cost[far] = 0.0
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        new_centers = sums / counts[:, None]
        rel = abs(prev_inertia - inertia) / max(1.0, inertia)
        centers = new_centers
        if rel < tol:
            break
        prev_labels = labels
        prev_inertia = inertia
    return KMeansResult(labels=labels, centers=centers,
                        inertia=_exact_inertia(x, centers, labels),
                        iterations=iterations)


def kmeans_best_of(x, c, restarts=50, seed=0, max_iter=300, tol=1e-12):
    """Lowest-inertia result over seeded restarts (seed, seed+1, ...)."""
    if restarts < 1:
        raise ParameterError("restarts must be at least 1")
    best = None
    for r in range(restarts):
        init = kmeanspp_init(x, c, seed + r)
        res = lloyd(x, init, max_iter=max_iter, tol=tol)
        if best is None or res.inertia < best.inertia:
            best = res
    return best
