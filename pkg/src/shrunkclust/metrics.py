"""Clustering evaluation: accuracy under the best label matching, and
normalized mutual information."""

import numpy as np

from .exceptions import DimensionError


def _labels(a):
    a = np.asarray(a, dtype=np.int64).ravel()
    if a.size and a.min() < 0:
        raise ValueError("labels must be nonnegative")
    return a


def contingency(pred, truth):
    """counts[l, h] = number of samples with pred == l and truth == h."""
    pred, truth = _labels(pred), _labels(truth)
    if len(pred) != len(truth):
        raise DimensionError(
            f"label vectors disagree: {len(pred)} vs {len(truth)}")
    cp = int(pred.max()) + 1 if len(pred) else 0
    ct = int(truth.max()) + 1 if len(truth) else 0
    table = np.zeros((cp, ct), dtype=np.int64)
    np.add.at(table, (pred, truth), 1)
    return table


def hungarian(cost):
    """Column assignment per row minimizing total cost (exact, O(n^3)).

    Potentials-based shortest augmenting path; returns sigma with
    sigma[i] = assigned column of row i.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise DimensionError(f"cost matrix must be square, got {cost.shape}")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix must be finite")
    n = cost.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    # 1-based with column 0 as the virtual root
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    match = np.zeros(n + 1, dtype=np.int64)  # match[j] = row assigned to col j
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        way = np.zeros(n + 1, dtype=np.int64)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = np.inf
            j1 = -1
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    sigma = np.empty(n, dtype=np.int64)
    for j in range(1, n + 1):
        sigma[match[j] - 1] = j - 1
    return sigma


def acc(pred, truth):
    """Fraction matched under the best one-to-one relabeling of clusters."""
    table = contingency(pred, truth)
    n = int(table.sum())
    if n == 0:
        raise DimensionError("empty label vectors")
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: table.shape[0], : table.shape[1]] = table
    sigma = hungarian(-padded.astype(np.float64))
    matched = padded[np.arange(size), sigma].sum()
    return float(matched) / n


def nmi(pred, truth):
    """Mutual information over the geometric mean of the entropies.

    Degenerate single-cluster partitions: 1.0 when both sides are a single
    cluster, else 0.0 (the plain formula would divide by zero).
    """
    table = contingency(pred, truth).astype(np.float64)
    n = table.sum()
    if n == 0:
        raise DimensionError("empty label vectors")
    pj = table.sum(axis=1) / n
    qh = table.sum(axis=0) / n
    hp = -np.sum(pj[pj > 0] * np.log(pj[pj > 0]))
    hq = -np.sum(qh[qh > 0] * np.log(qh[qh > 0]))
    if hp == 0.0 or hq == 0.0:
        return 1.0 if hp == hq == 0.0 else 0.0
    joint = table / n
    mask = joint > 0
    outer = pj[:, None] * qh[None, :]
    mi = float(np.sum(joint[mask] * np.log(joint[mask] / outer[mask])))
    return mi / float(np.sqrt(hp * hq))
