"""Layout quality metrics.

Trustworthiness penalizes low-dimensional neighbors that are not neighbors
in the original space:

    T(k) = 1 - 2 / (n k (2n - 3k - 1)) * sum_i sum_{j in U_i(k)} (r(i, j) - k)

where U_i(k) are the k nearest neighbors of i in the embedding that are not
among its k nearest in the original space, and r(i, j) is j's (1-based,
self-excluded) rank by original-space distance from i.
"""

from __future__ import annotations

import numpy as np

from .neighbors import pairwise_distances


def trustworthiness(
    original, embedded, k: int = 15, metric: str = "euclidean"
) -> float:
    """T(k) in [0, 1]; ``metric`` applies to the original space (the embedding
    is always ranked with euclidean distance)."""
    high = np.asarray(original, dtype=np.float64)
    low = np.asarray(embedded, dtype=np.float64)
    n = high.shape[0]
    if low.shape[0] != n:
        raise ValueError("original and embedded row counts differ")
    if not 1 <= k < n / 2:
        raise ValueError(f"k={k} out of range for n={n}")

    d_high = pairwise_distances(high, high, metric)
    d_low = pairwise_distances(low, low, "euclidean")
    np.fill_diagonal(d_high, np.inf)
    np.fill_diagonal(d_low, np.inf)

    order_high = np.argsort(d_high, axis=1, kind="stable")
    # rank_high[i, j] = 1-based rank of j among i's original-space neighbors
    rank_high = np.empty((n, n), dtype=np.int64)
    row = np.arange(n)
    for r in range(n):
        rank_high[row, order_high[:, r]] = r + 1

    knn_high = order_high[:, :k]
    knn_low = np.argsort(d_low, axis=1, kind="stable")[:, :k]

    penalty = 0
    for i in range(n):
        intruders = np.setdiff1d(knn_low[i], knn_high[i], assume_unique=True)
        penalty += int(np.sum(rank_high[i, intruders] - k))
    return 1.0 - 2.0 * penalty / (n * k * (2 * n - 3 * k - 1))
