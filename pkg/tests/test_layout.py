import numpy as np
import pytest
import scipy.sparse as sp

from sonomap.errors import CurveFitError
from sonomap.fuzzy import FuzzyGraph, build_fuzzy_graph, symmetrize
from sonomap.layout import (
    BOX_HALF_WIDTH,
    find_ab_params,
    initialize_layout,
    low_dim_similarity,
    make_epochs_per_sample,
    optimize_layout,
)
from sonomap.neighbors import build_knn_graph
from sonomap.params import UmapParams


def grid_fit_ab(min_dist, spread):
    """Independent least-squares oracle: coarse grid plus local refinement,
    no scipy optimizer involved."""
    xv = np.linspace(0.0, spread * 3.0, 300)
    yv = np.where(xv <= min_dist, 1.0, np.exp(-(xv - min_dist) / spread))

    def sse(a, b):
        return np.sum((1.0 / (1.0 + a * xv ** (2.0 * b)) - yv) ** 2)

    best = (np.inf, None, None)
    a_lo, a_hi, b_lo, b_hi = 0.05, 10.0, 0.1, 3.0
    for _ in range(6):
        avals = np.linspace(a_lo, a_hi, 40)
        bvals = np.linspace(b_lo, b_hi, 40)
        for a in avals:
            for b in bvals:
                s = sse(a, b)
                if s < best[0]:
                    best = (s, a, b)
        _, a0, b0 = best
        a_span = (a_hi - a_lo) / 8
        b_span = (b_hi - b_lo) / 8
        a_lo, a_hi = max(1e-3, a0 - a_span), a0 + a_span
        b_lo, b_hi = max(1e-3, b0 - b_span), b0 + b_span
    return best[1], best[2]


class TestFindAbParams:
    def test_golden_min_dist_01(self):
        a, b = find_ab_params(0.1, 1.0)
        assert a == pytest.approx(1.577, abs=2e-3)
        assert b == pytest.approx(0.895, abs=2e-3)

    def test_golden_paper_configuration(self):
        # min_dist=0.5, spread=1.0 is the configuration both maps use.
        a, b = find_ab_params(0.5, 1.0)
        assert a == pytest.approx(0.5830300203414425, rel=1e-6)
        assert b == pytest.approx(1.3341669924314914, rel=1e-6)

    @pytest.mark.parametrize("min_dist,spread", [(0.1, 1.0), (0.5, 1.0), (0.0, 2.0)])
    def test_matches_grid_oracle(self, min_dist, spread):
        a, b = find_ab_params(min_dist, spread)
        a_ref, b_ref = grid_fit_ab(min_dist, spread)
        assert a == pytest.approx(a_ref, abs=5e-3)
        assert b == pytest.approx(b_ref, abs=5e-3)

    @pytest.mark.parametrize("min_dist,spread", [(0.1, 1.0), (0.5, 1.0), (1.0, 2.0)])
    def test_curve_shape_invariants(self, min_dist, spread):
        a, b = find_ab_params(min_dist, spread)
        xs = np.linspace(0.0, 3.0 * spread, 500)
        f = low_dim_similarity(xs, a, b)
        assert f[0] == 1.0
        assert np.all(np.diff(f) <= 1e-12)

    def test_deterministic(self):
        assert find_ab_params(0.5, 1.0) == find_ab_params(0.5, 1.0)

    def test_invalid_range_rejected(self):
        with pytest.raises(ValueError):
            find_ab_params(3.0, 1.0)
        with pytest.raises(ValueError):
            find_ab_params(-0.1, 1.0)


def ring_graph(n, offset=0, size=None):
    size = size or n
    entries = []
    for i in range(n):
        j = (i + 1) % n
        entries.append((offset + i, offset + j, 1.0))
    rows, cols, vals = zip(*entries)
    return sp.coo_matrix((vals, (rows, cols)), shape=(size, size))


class TestInitializeLayout:
    def test_shape_and_range_small_n(self):
        w = symmetrize(ring_graph(3))
        coords = initialize_layout(FuzzyGraph(w, np.zeros(3), np.ones(3)), seed=9)
        assert coords.shape == (3, 2)
        assert np.all(np.abs(coords) <= BOX_HALF_WIDTH)

    def test_deterministic_both_paths(self):
        small = symmetrize(ring_graph(5))
        a = initialize_layout(FuzzyGraph(small, np.zeros(5), np.ones(5)), seed=3)
        b = initialize_layout(FuzzyGraph(small, np.zeros(5), np.ones(5)), seed=3)
        assert np.array_equal(a, b)
        big = symmetrize(ring_graph(20))
        a = initialize_layout(FuzzyGraph(big, np.zeros(20), np.ones(20)), seed=3)
        b = initialize_layout(FuzzyGraph(big, np.zeros(20), np.ones(20)), seed=3)
        assert np.array_equal(a, b)
        assert np.all(np.abs(a) <= BOX_HALF_WIDTH)

    def test_spectral_separates_two_components(self):
        # Two disjoint 6-rings: no point of one component may coincide with
        # any point of the other.
        w = symmetrize((ring_graph(6, 0, 12) + ring_graph(6, 6, 12)).tocsr())
        coords = initialize_layout(FuzzyGraph(w, np.zeros(12), np.ones(12)), seed=1)
        first, second = coords[:6], coords[6:]
        cross = np.linalg.norm(first[:, None, :] - second[None, :, :], axis=2)
        assert cross.min() > 1e-9

    def test_real_graph_uses_full_box(self):
        rng = np.random.default_rng(4)
        knn = build_knn_graph(rng.normal(size=(40, 6)), k=5, metric="euclidean")
        fuzzy = build_fuzzy_graph(knn)
        coords = initialize_layout(fuzzy, seed=0)
        assert coords.min() == -BOX_HALF_WIDTH
        assert coords.max() == BOX_HALF_WIDTH


@pytest.fixture(scope="module")
def small_problem():
    rng = np.random.default_rng(21)
    knn = build_knn_graph(rng.normal(size=(40, 6)), k=5, metric="euclidean")
    fuzzy = build_fuzzy_graph(knn)
    params = UmapParams(n_neighbors=5, n_epochs=50, seed=77)
    a, b = find_ab_params(params.min_dist, params.spread)
    init = initialize_layout(fuzzy, params.seed)
    return fuzzy, init, params, a, b


class TestOptimizeLayout:
    def test_all_frozen_is_identity(self, small_problem):
        fuzzy, init, params, a, b = small_problem
        mask = np.zeros(len(init), dtype=bool)
        out = optimize_layout(fuzzy, init, params, a, b, mask)
        assert np.array_equal(out, init)

    def test_input_never_mutated(self, small_problem):
        fuzzy, init, params, a, b = small_problem
        snapshot = init.copy()
        optimize_layout(fuzzy, init, params, a, b)
        assert np.array_equal(init, snapshot)

    def test_two_points_attract(self):
        w = symmetrize(sp.coo_matrix(([1.0], ([0], [1])), shape=(2, 2)))
        init = np.array([[-5.0, 0.0], [5.0, 0.0]])
        params = UmapParams(n_epochs=100, seed=1)
        a, b = find_ab_params(params.min_dist, params.spread)
        out = optimize_layout(w, init, params, a, b)
        assert np.linalg.norm(out[0] - out[1]) < 10.0

    def test_deterministic(self, small_problem):
        fuzzy, init, params, a, b = small_problem
        out1 = optimize_layout(fuzzy, init, params, a, b)
        out2 = optimize_layout(fuzzy, init, params, a, b)
        assert np.array_equal(out1, out2)

    def test_partial_mask_freezes_exactly_those_rows(self, small_problem):
        fuzzy, init, params, a, b = small_problem
        mask = np.zeros(len(init), dtype=bool)
        mask[::2] = True
        out = optimize_layout(fuzzy, init, params, a, b, mask)
        assert np.array_equal(out[~mask], init[~mask])
        assert not np.array_equal(out[mask], init[mask])

    def test_mask_shape_checked(self, small_problem):
        fuzzy, init, params, a, b = small_problem
        with pytest.raises(ValueError, match="movable_mask"):
            optimize_layout(fuzzy, init, params, a, b, np.ones(3, dtype=bool))


def test_epochs_per_sample_inverse_weight():
    eps = make_epochs_per_sample(np.array([1.0, 0.5, 0.25]), 100)
    assert eps.tolist() == [1.0, 2.0, 4.0]
