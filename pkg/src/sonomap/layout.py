"""2D layout: similarity curve fit, spectral initialization, SGD optimization.

The optimizer minimizes fuzzy cross entropy between the high-dimensional
membership graph and low-dimensional similarities f(d) = 1 / (1 + a d^(2b)).
Edges are visited proportionally to their weight via an epochs-per-sample
schedule; each attractive update is paired with ``negative_sample_rate``
uniformly-drawn repulsive updates.  Gradient components are clipped to
[-4, 4] and the learning rate decays linearly to zero.

The hot loop is a numba kernel.  Negative samples come from the package's
counter-based SplitMix64 stream (see rng.py) so a fit is bit-reproducible
from its seed alone, and rows excluded by ``movable_mask`` are never written,
which is what lets the out-of-sample transform extend a frozen layout.
"""

from __future__ import annotations

import numba
import numpy as np
import scipy.sparse as sp
from scipy.optimize import curve_fit

from .errors import CurveFitError
from .fuzzy import FuzzyGraph
from .params import UmapParams
from .rng import MASK64, SplitMix64

BOX_HALF_WIDTH = 10.0  # layouts live in the [-10, 10] square
GRAD_CLIP = 4.0
REPULSION_STRENGTH = 1.0
SPECTRAL_MIN_POINTS = 8


def low_dim_similarity(d, a: float, b: float):
    """f(d) = 1 / (1 + a d^(2b)), the differentiable neighbor curve."""
    return 1.0 / (1.0 + a * np.asarray(d, dtype=np.float64) ** (2.0 * b))


def find_ab_params(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Least-squares (a, b) so f matches the offset exponential target.

    Target: 1 for d <= min_dist, exp(-(d - min_dist)/spread) beyond, sampled
    at 300 even points over [0, 3*spread].  Deterministic for given inputs.
    """
    if not 0.0 <= min_dist < 3.0 * spread:
        raise ValueError("need 0 <= min_dist < 3 * spread")

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2.0 * b))

    xv = np.linspace(0.0, spread * 3.0, 300)
    yv = np.where(xv <= min_dist, 1.0, np.exp(-(xv - min_dist) / spread))
    try:
        (a, b), _ = curve_fit(curve, xv, yv, maxfev=5000)
    except RuntimeError as exc:
        raise CurveFitError(f"curve fit failed for min_dist={min_dist}, spread={spread}: {exc}") from exc
    mse = float(np.mean((curve(xv, a, b) - yv) ** 2))
    if not (a > 0 and b > 0 and mse < 1e-2):
        raise CurveFitError(f"degenerate curve fit: a={a}, b={b}, mse={mse}")
    return float(a), float(b)


def _scale_to_box(coords: np.ndarray) -> np.ndarray:
    """Affinely map each axis onto [-10, 10]; constant axes collapse to 0."""
    out = np.zeros_like(coords)
    for d in range(coords.shape[1]):
        lo = coords[:, d].min()
        hi = coords[:, d].max()
        if hi > lo:
            out[:, d] = 2.0 * BOX_HALF_WIDTH * (coords[:, d] - lo) / (hi - lo) - BOX_HALF_WIDTH
    return out


def _random_box_layout(n: int, rng: SplitMix64) -> np.ndarray:
    u = rng.uniform_array(n * 2).reshape(n, 2)
    return 2.0 * BOX_HALF_WIDTH * u - BOX_HALF_WIDTH


def initialize_layout(
    fuzzy: FuzzyGraph | sp.spmatrix, seed: int, *, rng: SplitMix64 | None = None
) -> np.ndarray:
    """Spectral start from the normalized Laplacian, random fallback.

    Uses the eigenvectors for the two smallest eigenvalues past the first
    (dense solve; fine at this engine's scale), scaled into the standard box.
    Falls back to a seeded uniform layout for tiny inputs (n < 8) or when the
    eigensolve fails or returns non-finite values.  Passing ``rng`` lets a
    caller thread one stream through init and optimization.
    """
    weights = fuzzy.weights if isinstance(fuzzy, FuzzyGraph) else fuzzy.tocsr()
    n = weights.shape[0]
    if rng is None:
        rng = SplitMix64(seed)
    if n < SPECTRAL_MIN_POINTS:
        return _random_box_layout(n, rng)
    try:
        w = np.asarray(weights.todense(), dtype=np.float64)
        deg = w.sum(axis=1)
        if np.any(deg <= 0):
            raise np.linalg.LinAlgError("isolated vertex")
        inv_sqrt = 1.0 / np.sqrt(deg)
        lap = np.eye(n) - (inv_sqrt[:, None] * w) * inv_sqrt[None, :]
        _, vecs = np.linalg.eigh(lap)
        coords = vecs[:, 1:3].astype(np.float64)
        if not np.all(np.isfinite(coords)):
            raise np.linalg.LinAlgError("non-finite eigenvectors")
    except np.linalg.LinAlgError:
        return _random_box_layout(n, rng)
    return _scale_to_box(coords)


def make_epochs_per_sample(weights: np.ndarray, n_epochs: int) -> np.ndarray:
    """Edge visit period: weight w fires ~n_epochs * w / w_max times."""
    return weights.max() / weights


@numba.njit(cache=True)
def _splitmix_draw(seed: np.uint64, counter: np.int64) -> np.uint64:
    z = seed + np.uint64(counter) * np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@numba.njit(cache=True)
def _splitmix_bulk(seed: np.uint64, counter: np.int64, count: np.int64) -> np.ndarray:
    """Test hook: the same draws rng.bulk_u64 produces, from compiled code."""
    out = np.empty(count, dtype=np.uint64)
    for i in range(count):
        out[i] = _splitmix_draw(seed, counter + 1 + i)
    return out


@numba.njit(cache=True)
def _clip(v: float) -> float:
    if v > 4.0:
        return 4.0
    if v < -4.0:
        return -4.0
    return v


@numba.njit(cache=True)
def _sgd_epochs(
    coords,
    head,
    tail,
    epochs_per_sample,
    movable,
    a,
    b,
    gamma,
    n_epochs,
    initial_lr,
    negative_sample_rate,
    seed,
    counter,
):
    n_vertices = coords.shape[0]
    dim = coords.shape[1]
    epoch_of_next_sample = epochs_per_sample.copy()
    for epoch in range(n_epochs):
        alpha = initial_lr * (1.0 - epoch / n_epochs)
        for e in range(head.shape[0]):
            if epoch_of_next_sample[e] > epoch:
                continue
            j = head[e]
            k = tail[e]
            dist_sq = 0.0
            for d in range(dim):
                diff = coords[j, d] - coords[k, d]
                dist_sq += diff * diff
            if dist_sq > 0.0:
                grad_coeff = (-2.0 * a * b * dist_sq ** (b - 1.0)) / (
                    a * dist_sq**b + 1.0
                )
            else:
                grad_coeff = 0.0
            for d in range(dim):
                g = _clip(grad_coeff * (coords[j, d] - coords[k, d]))
                if movable[j]:
                    coords[j, d] += alpha * g
                if movable[k]:
                    coords[k, d] -= alpha * g
            epoch_of_next_sample[e] += epochs_per_sample[e]

            for _ in range(negative_sample_rate):
                counter += 1
                t = np.int64(_splitmix_draw(seed, counter) % np.uint64(n_vertices))
                if t == j:
                    continue
                dist_sq = 0.0
                for d in range(dim):
                    diff = coords[j, d] - coords[t, d]
                    dist_sq += diff * diff
                if dist_sq > 0.0:
                    grad_coeff = (2.0 * gamma * b) / (
                        (0.001 + dist_sq) * (a * dist_sq**b + 1.0)
                    )
                else:
                    grad_coeff = 0.0
                if movable[j]:
                    for d in range(dim):
                        if grad_coeff > 0.0:
                            g = _clip(grad_coeff * (coords[j, d] - coords[t, d]))
                        else:
                            g = 4.0
                        coords[j, d] += alpha * g
    return counter


def _edge_arrays(weights: sp.spmatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """COO edge list in canonical (row, col) order."""
    coo = weights.tocoo()
    order = np.lexsort((coo.col, coo.row))
    return (
        coo.row[order].astype(np.int64),
        coo.col[order].astype(np.int64),
        coo.data[order].astype(np.float64),
    )


def optimize_layout(
    fuzzy: FuzzyGraph | sp.spmatrix,
    init_coords: np.ndarray,
    params: UmapParams,
    a: float,
    b: float,
    movable_mask: np.ndarray | None = None,
    *,
    n_epochs: int | None = None,
    rng: SplitMix64 | None = None,
) -> np.ndarray:
    """Run the stochastic layout optimization; returns new coordinates.

    Rows where ``movable_mask`` is False are bit-identical on return; the
    input array itself is never mutated.  With ``rng`` omitted a fresh stream
    is seeded from ``params.seed``.
    """
    weights = fuzzy.weights if isinstance(fuzzy, FuzzyGraph) else fuzzy
    coords = np.array(init_coords, dtype=np.float64, order="C", copy=True)
    n = coords.shape[0]
    if weights.shape != (n, n):
        raise ValueError("graph size does not match coordinate rows")
    if movable_mask is None:
        movable = np.ones(n, dtype=np.bool_)
    else:
        movable = np.asarray(movable_mask, dtype=np.bool_)
        if movable.shape != (n,):
            raise ValueError("movable_mask must have one entry per row")
    head, tail, w = _edge_arrays(weights)
    if head.shape[0] == 0 or not movable.any():
        return coords
    eps = make_epochs_per_sample(w, params.n_epochs if n_epochs is None else n_epochs)
    if rng is None:
        rng = SplitMix64(params.seed)
    rng.counter = int(
        _sgd_epochs(
            coords,
            head,
            tail,
            eps,
            movable,
            float(a),
            float(b),
            REPULSION_STRENGTH,
            np.int64(params.n_epochs if n_epochs is None else n_epochs),
            float(params.initial_learning_rate),
            np.int64(params.negative_sample_rate),
            np.uint64(rng.seed & MASK64),
            np.int64(rng.counter),
        )
    )
    return coords
