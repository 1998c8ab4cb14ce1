"""Fitted 2D projections: the full fit pipeline and out-of-sample transform.

``umap_fit`` composes the pieces: exact kNN graph -> smooth-kNN calibration
-> fuzzy graph -> similarity curve fit -> spectral init -> SGD layout.  The
resulting ``UmapModel`` is immutable in use: ``umap_transform`` places new
vectors into the existing layout by neighbor-weighted initialization plus a
short optimization pass in which only the new rows may move.

One SplitMix64 stream per fit or transform call, seeded from the params,
makes both operations bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .fuzzy import FuzzyGraph, build_fuzzy_graph, calibrate_smooth_knn
from .layout import find_ab_params, initialize_layout, optimize_layout
from .neighbors import KnnGraph, build_knn_graph, knn_exact
from .params import UmapParams
from .rng import SplitMix64

MODALITY_DIMS = {"image": 512, "text": 1536}

# The fit hands over a converged layout whose learning rate has decayed to
# zero.  The transform pass therefore polishes query placement at a
# correspondingly low temperature rather than restarting at fit temperature,
# which would let negative sampling walk new points far from their
# neighborhoods.  0.002 keeps duplicate queries within a small fraction of
# the map diagonal even on unstructured data.
TRANSFORM_LR_DAMPING = 0.002


@dataclass(frozen=True)
class EmbeddingVector:
    """One high-dimensional vector with its identity and modality."""

    id: str
    modality: str  # "image" | "text"
    values: np.ndarray  # float32

    def __post_init__(self):
        object.__setattr__(
            self, "values", np.asarray(self.values, dtype=np.float32)
        )
        if self.modality not in MODALITY_DIMS:
            raise ValueError(f"unknown modality {self.modality!r}")
        if self.values.ndim != 1 or self.values.shape[0] < 2:
            raise ValueError(f"embedding {self.id!r} must be a vector of length >= 2")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"embedding {self.id!r} has non-finite values")
        if not np.any(self.values):
            raise ValueError(f"embedding {self.id!r} has zero norm")

    def check_dim(self, expected: int) -> "EmbeddingVector":
        if self.values.shape[0] != expected:
            raise ValueError(
                f"embedding {self.id!r} has dimension {self.values.shape[0]}, "
                f"expected {expected} for modality {self.modality!r}"
            )
        return self


@dataclass(eq=False)
class UmapModel:
    """One fitted projection with everything needed to extend it."""

    params: UmapParams
    training_ids: list[str]
    vectors: np.ndarray  # (n, dim) float32 training vectors
    knn: KnnGraph
    fuzzy: FuzzyGraph
    coords: np.ndarray  # (n, 2) float64
    a: float
    b: float

    @property
    def n_points(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def transform(self, new_vectors) -> np.ndarray:
        return umap_transform(self, new_vectors)

    def to_dict(self) -> dict:
        coo = self.fuzzy.weights.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return {
            "params": self.params.to_dict(),
            "training_ids": list(self.training_ids),
            "dim": int(self.dim),
            "vectors": [[float(v) for v in row] for row in self.vectors],
            "knn": {
                "indices": self.knn.indices.tolist(),
                "distances": self.knn.distances.tolist(),
            },
            "fuzzy": {
                "rho": self.fuzzy.rho.tolist(),
                "sigma": self.fuzzy.sigma.tolist(),
                "rows": coo.row[order].tolist(),
                "cols": coo.col[order].tolist(),
                "weights": coo.data[order].tolist(),
            },
            "coords": self.coords.tolist(),
            "a": float(self.a),
            "b": float(self.b),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UmapModel":
        n = len(data["training_ids"])
        fz = data["fuzzy"]
        weights = sp.coo_matrix(
            (fz["weights"], (fz["rows"], fz["cols"])), shape=(n, n)
        ).tocsr()
        return cls(
            params=UmapParams.from_dict(data["params"]),
            training_ids=list(data["training_ids"]),
            vectors=np.asarray(data["vectors"], dtype=np.float32).reshape(n, data["dim"]),
            knn=KnnGraph(
                indices=np.asarray(data["knn"]["indices"], dtype=np.int64),
                distances=np.asarray(data["knn"]["distances"], dtype=np.float64),
            ),
            fuzzy=FuzzyGraph(
                weights=weights,
                rho=np.asarray(fz["rho"], dtype=np.float64),
                sigma=np.asarray(fz["sigma"], dtype=np.float64),
            ),
            coords=np.asarray(data["coords"], dtype=np.float64).reshape(n, 2),
            a=float(data["a"]),
            b=float(data["b"]),
        )


def _validate_matrix(vectors, metric: str) -> np.ndarray:
    m = np.asarray(vectors, dtype=np.float32)
    if m.ndim != 2:
        raise ValueError("expected a 2-D array of row vectors")
    if not np.all(np.isfinite(m)):
        raise ValueError("vectors contain non-finite values")
    if metric == "cosine" and np.any(~np.any(m, axis=1)):
        raise ValueError("zero-norm vector is not usable with the cosine metric")
    return m


def umap_fit(vectors, params: UmapParams, ids: list[str] | None = None) -> UmapModel:
    """Fit a 2D projection of ``vectors`` under ``params``."""
    m = _validate_matrix(vectors, params.metric)
    n = m.shape[0]
    if n < params.n_neighbors + 1:
        raise ValueError(
            f"need at least n_neighbors+1 = {params.n_neighbors + 1} vectors, got {n}"
        )
    if ids is None:
        ids = [str(i) for i in range(n)]
    elif len(ids) != n:
        raise ValueError("ids length does not match vector count")

    knn = build_knn_graph(m, params.n_neighbors, params.metric)
    fuzzy = build_fuzzy_graph(knn)
    a, b = find_ab_params(params.min_dist, params.spread)
    rng = SplitMix64(params.seed)
    init = initialize_layout(fuzzy, params.seed, rng=rng)
    coords = optimize_layout(fuzzy, init, params, a, b, rng=rng)
    return UmapModel(
        params=params,
        training_ids=list(ids),
        vectors=m,
        knn=knn,
        fuzzy=fuzzy,
        coords=coords,
        a=a,
        b=b,
    )


def transform_init(model: UmapModel, query: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Neighbor indices, membership weights, and start position for one query.

    A query at zero distance from a training point starts exactly at that
    point's coordinates; otherwise the start is the membership-weighted mean
    of its neighbors' coordinates.
    """
    k = model.params.n_neighbors
    query = np.asarray(query, dtype=np.float32)
    indices, distances = knn_exact(query, model.vectors, k, model.params.metric)
    rho, sigma = calibrate_smooth_knn(distances)
    weights = np.exp(-np.maximum(0.0, distances - rho) / sigma)
    nearest = int(indices[0])
    # Bitwise equality also counts as zero distance: the BLAS path can leave
    # ~1e-16 residue on a true duplicate, and duplicates must land exactly.
    if distances[0] == 0.0 or np.array_equal(query, model.vectors[nearest]):
        start = model.coords[nearest].copy()
    else:
        start = (weights[:, None] * model.coords[indices]).sum(axis=0) / weights.sum()
    return indices, weights, start


def umap_transform(model: UmapModel, new_vectors) -> np.ndarray:
    """Project new vectors into a fitted layout without refitting.

    Training coordinates are frozen; only the query rows move, for
    ceil(n_epochs / 3) epochs at the damped transform learning rate.  The
    model itself is never mutated.
    """
    q = _validate_matrix(
        np.atleast_2d(np.asarray(new_vectors, dtype=np.float32)), model.params.metric
    )
    if q.shape[1] != model.dim:
        raise ValueError(f"dimension mismatch: query {q.shape[1]}, model {model.dim}")
    n, m_count = model.n_points, q.shape[0]
    if m_count == 0:
        return np.zeros((0, 2))

    rows, cols, vals = [], [], []
    inits = np.empty((m_count, 2))
    for qi in range(m_count):
        indices, weights, start = transform_init(model, q[qi])
        inits[qi] = start
        rows.extend([n + qi] * len(indices))
        cols.extend(indices.tolist())
        vals.extend(weights.tolist())

    total = n + m_count
    graph = sp.coo_matrix((vals, (rows, cols)), shape=(total, total)).tocsr()
    combined = np.vstack([model.coords, inits])
    movable = np.zeros(total, dtype=np.bool_)
    movable[n:] = True
    epochs = math.ceil(model.params.n_epochs / 3)
    damped = replace(
        model.params,
        initial_learning_rate=model.params.initial_learning_rate * TRANSFORM_LR_DAMPING,
    )
    coords = optimize_layout(
        graph,
        combined,
        damped,
        model.a,
        model.b,
        movable,
        n_epochs=epochs,
        rng=SplitMix64(model.params.seed),
    )
    return coords[n:]
