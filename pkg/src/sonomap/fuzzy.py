"""Smooth-kNN calibration and fuzzy neighborhood graph construction.

Each point gets a local connectivity offset rho (its nearest-neighbor
distance) and a bandwidth sigma chosen so the effective neighborhood mass

    sum_j exp(-max(0, d_ij - rho_i) / sigma_i)  ==  log2(k)

Directed memberships are then symmetrized with the probabilistic t-conorm
``w + w' - w*w'`` to form the weighted graph the layout optimizer consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .neighbors import KnnGraph

SIGMA_LO = 1e-8
SIGMA_HI = 1e4
MAX_BISECT_ITERS = 64
RESIDUAL_TOL = 1e-5


def smooth_knn_mass(distances: np.ndarray, rho: float, sigma: float) -> float:
    """The calibrated neighborhood mass for one sorted distance row."""
    return float(np.sum(np.exp(-np.maximum(0.0, distances - rho) / sigma)))


def calibrate_smooth_knn(distances, target: float | None = None) -> tuple[float, float]:
    """Solve for (rho, sigma) on one sorted row of k neighbor distances.

    sigma is found by bisection over [1e-8, 1e4] in at most 64 iterations,
    stopping early when the mass is within 1e-5 of the target (log2(k) by
    default).  A degenerate row whose distances are all equal has mass k for
    every sigma; it returns sigma clamped to 1.0.  When no finite root exists
    the bisection's boundary value is returned as-is, which is the documented
    behavior tests pin down.
    """
    row = np.asarray(distances, dtype=np.float64)
    if row.ndim != 1 or row.shape[0] < 2:
        raise ValueError("need a 1-D row of at least 2 distances")
    if np.any(np.diff(row) < 0):
        raise ValueError("distance row must be sorted ascending")
    k = row.shape[0]
    if target is None:
        target = float(np.log2(k))
    rho = float(row[0])
    if row[-1] == row[0]:
        return rho, 1.0
    lo, hi = SIGMA_LO, SIGMA_HI
    mid = (lo + hi) / 2.0
    for _ in range(MAX_BISECT_ITERS):
        mid = (lo + hi) / 2.0
        mass = smooth_knn_mass(row, rho, mid)
        if abs(mass - target) <= RESIDUAL_TOL:
            return rho, mid
        if mass > target:
            hi = mid
        else:
            lo = mid
    return rho, mid


@dataclass(eq=False)
class FuzzyGraph:
    """Symmetrized membership graph plus the per-point calibration."""

    weights: sp.csr_matrix  # (n, n) symmetric, entries in (0, 1]
    rho: np.ndarray  # (n,)
    sigma: np.ndarray  # (n,)

    @property
    def n_points(self) -> int:
        return self.weights.shape[0]


def symmetrize(directed: sp.spmatrix) -> sp.csr_matrix:
    """Probabilistic t-conorm union: W + W' - W o W' (o = elementwise)."""
    w = directed.tocsr()
    wt = w.T.tocsr()
    result = w + wt - w.multiply(wt)
    result.eliminate_zeros()
    return result.tocsr()


def membership_strengths(knn: KnnGraph, rho: np.ndarray, sigma: np.ndarray) -> sp.csr_matrix:
    """Directed weights w_ij = exp(-max(0, d_ij - rho_i) / sigma_i)."""
    n, k = knn.indices.shape
    rows = np.repeat(np.arange(n), k)
    cols = knn.indices.ravel()
    vals = np.exp(
        -np.maximum(0.0, knn.distances - rho[:, None]) / sigma[:, None]
    ).ravel()
    return sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


def build_fuzzy_graph(knn: KnnGraph) -> FuzzyGraph:
    """Calibrate every row and symmetrize the directed memberships."""
    n, k = knn.indices.shape
    rho = np.empty(n)
    sigma = np.empty(n)
    target = float(np.log2(k))
    for i in range(n):
        rho[i], sigma[i] = calibrate_smooth_knn(knn.distances[i], target)
    directed = membership_strengths(knn, rho, sigma)
    return FuzzyGraph(weights=symmetrize(directed), rho=rho, sigma=sigma)
