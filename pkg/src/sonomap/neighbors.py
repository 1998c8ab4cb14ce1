"""Distance computation and exact k-nearest-neighbor search.

Everything here is exact and deterministic: distances are computed with
vectorized NumPy in float64, and ties in neighbor ranking are broken by the
lower corpus index (stable argsort).  At the corpus sizes this engine targets
(n of order 1000) the O(n^2) scan is both fast enough and trivially
verifiable against a brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

METRICS = ("cosine", "euclidean")


def _as_matrix(vectors) -> np.ndarray:
    m = np.asarray(vectors, dtype=np.float64)
    if m.ndim == 1:
        m = m[None, :]
    if m.ndim != 2:
        raise ValueError(f"expected vectors of rank 1 or 2, got rank {m.ndim}")
    return m


def cosine_distance(a, b) -> float:
    """1 - cos(a, b), in [0, 2].

    Raises on dimension mismatch and on zero-norm inputs; a zero vector has
    no direction and almost always signals a corrupt embedding upstream.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("zero-norm vector has no cosine distance")
    return float(np.clip(1.0 - float(a @ b) / (na * nb), 0.0, 2.0))


def euclidean_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def pairwise_distances(queries, corpus, metric: str = "cosine") -> np.ndarray:
    """m x n distance matrix between query rows and corpus rows."""
    q = _as_matrix(queries)
    c = _as_matrix(corpus)
    if q.shape[1] != c.shape[1]:
        raise ValueError(f"dimension mismatch: {q.shape[1]} vs {c.shape[1]}")
    if metric == "cosine":
        qn = np.linalg.norm(q, axis=1)
        cn = np.linalg.norm(c, axis=1)
        if np.any(qn == 0.0) or np.any(cn == 0.0):
            raise ValueError("zero-norm vector has no cosine distance")
        d = 1.0 - (q @ c.T) / np.outer(qn, cn)
        return np.clip(d, 0.0, 2.0)
    if metric == "euclidean":
        sq = (q * q).sum(axis=1)[:, None] + (c * c).sum(axis=1)[None, :]
        d2 = sq - 2.0 * (q @ c.T)
        return np.sqrt(np.maximum(d2, 0.0))
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def knn_exact(query, corpus, k: int, metric: str = "cosine"):
    """The k nearest corpus rows to one query vector.

    Returns ``(indices, distances)`` with distances ascending and ties broken
    by the lower index, so results are identical across runs and platforms.
    """
    c = _as_matrix(corpus)
    if not 1 <= k <= c.shape[0]:
        raise ValueError(f"k={k} out of range for corpus of {c.shape[0]}")
    d = pairwise_distances(query, c, metric)[0]
    order = np.argsort(d, kind="stable")[:k]
    return order.astype(np.int64), d[order]


@dataclass(eq=False)
class KnnGraph:
    """Self-excluded neighbor table over one training set.

    ``indices[i]`` are the k nearest other points to point i; ``distances[i]``
    is sorted ascending.
    """

    indices: np.ndarray  # (n, k) int64
    distances: np.ndarray  # (n, k) float64

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.distances = np.asarray(self.distances, dtype=np.float64)
        if self.indices.shape != self.distances.shape:
            raise ValueError("indices/distances shape mismatch")
        if np.any(np.diff(self.distances, axis=1) < 0):
            raise ValueError("distance rows must be sorted ascending")
        if np.any(self.distances < 0):
            raise ValueError("distances must be non-negative")
        if np.any(self.indices == np.arange(self.indices.shape[0])[:, None]):
            raise ValueError("self-index found in neighbor row")

    @property
    def n_points(self) -> int:
        return self.indices.shape[0]

    @property
    def n_neighbors(self) -> int:
        return self.indices.shape[1]


def build_knn_graph(vectors, k: int, metric: str = "cosine") -> KnnGraph:
    """Exact kNN graph over one set of vectors, self excluded."""
    m = _as_matrix(vectors)
    n = m.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} out of range for {n} points with self excluded")
    d = pairwise_distances(m, m, metric)
    # Force the diagonal past any real distance so self never ranks.
    np.fill_diagonal(d, np.inf)
    order = np.argsort(d, axis=1, kind="stable")[:, :k]
    dists = np.take_along_axis(d, order, axis=1)
    return KnnGraph(indices=order, distances=dists)
