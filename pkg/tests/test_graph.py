import numpy as np
import pytest

from fcmsc.data import MultiViewDataset
from fcmsc.exceptions import (
    DegenerateBandwidthError,
    InvalidInputError,
    InvalidParameterError,
)
from fcmsc.graph import build_view_graphs, knn_adjacency, laplacian


def brute_force_knn(points, k):
    """All-pairs distances plus per-point k smallest, scalar style."""
    n = points.shape[1]
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            dist[i, j] = np.linalg.norm(points[:, i] - points[:, j])
    neighbors = []
    for i in range(n):
        order = [j for j in np.argsort(dist[i]) if j != i]
        neighbors.append(set(order[:k]))
    return dist, neighbors


class TestKnnAdjacency:
    def test_coincident_pair_weight_one(self):
        pts = np.array([[0.0, 0.0, 5.0], [0.0, 0.0, 5.0]])
        W = knn_adjacency(pts, k=1, sigma=1.0)
        assert W[0, 1] == pytest.approx(1.0)
        assert W[1, 0] == pytest.approx(1.0)

    def test_symmetric_zero_diagonal(self):
        rng = np.random.default_rng(0)
        W = knn_adjacency(rng.normal(size=(4, 12)), k=3)
        assert (W == W.T).all()
        assert (np.diagonal(W) == 0).all()
        assert W.min() >= 0

    def test_two_separated_triples_block_diagonal(self):
        rng = np.random.default_rng(1)
        a = rng.normal(scale=0.1, size=(2, 3))
        b = rng.normal(scale=0.1, size=(2, 3)) + 100.0
        pts = np.hstack([a, b])
        W = knn_adjacency(pts, k=2)
        assert (W[:3, 3:] == 0).all()
        assert (W[3:, :3] == 0).all()
        # within-group edges agree with a brute-force neighbor search
        _, neighbors = brute_force_knn(pts, 2)
        for i in range(6):
            linked = set(np.nonzero(W[i])[0])
            assert linked == neighbors[i]  # k=2 within triples is mutual

    def test_k_out_of_range(self):
        pts = np.zeros((2, 4))
        with pytest.raises(InvalidParameterError):
            knn_adjacency(pts, k=4)
        with pytest.raises(InvalidParameterError):
            knn_adjacency(pts, k=0)

    def test_degenerate_auto_bandwidth(self):
        pts = np.zeros((3, 5))
        with pytest.raises(DegenerateBandwidthError):
            knn_adjacency(pts, k=2)


class TestLaplacian:
    def test_empty_graph(self):
        g = laplacian(np.zeros((4, 4)))
        assert (g.L == 0).all()

    def test_two_node_graph(self):
        w = 0.7
        W = np.array([[0.0, w], [w, 0.0]])
        g = laplacian(W)
        np.testing.assert_allclose(g.L, [[w, -w], [-w, w]])

    def test_quadratic_form_oracle(self):
        rng = np.random.default_rng(2)
        n = 7
        W = np.abs(rng.normal(size=(n, n)))
        W = (W + W.T) / 2
        np.fill_diagonal(W, 0.0)
        g = laplacian(W)
        for _ in range(100):
            x = rng.normal(size=n)
            quad = x @ g.L @ x
            by_hand = 0.5 * sum(
                W[j, k] * (x[j] - x[k]) ** 2 for j in range(n) for k in range(n)
            )
            assert abs(quad - by_hand) < 1e-9

    def test_row_sums_and_psd(self):
        rng = np.random.default_rng(3)
        W = knn_adjacency(rng.normal(size=(3, 15)), k=4)
        g = laplacian(W)
        np.testing.assert_allclose(g.L.sum(axis=1), 0.0, atol=1e-9)
        w = np.linalg.eigvalsh(g.L)
        assert w.min() >= -1e-9
        const = np.ones(15)
        assert np.abs(g.L @ const).max() < 1e-9

    def test_component_count_matches_zero_eigenvalue_multiplicity(self):
        # two disjoint edges plus one isolated vertex: 3 components
        W = np.zeros((5, 5))
        W[0, 1] = W[1, 0] = 1.0
        W[2, 3] = W[3, 2] = 0.5
        g = laplacian(W)
        w = np.linalg.eigvalsh(g.L)
        assert (np.abs(w) < 1e-9).sum() == 3

    def test_asymmetric_rejected(self):
        W = np.zeros((3, 3))
        W[0, 1] = 1.0
        with pytest.raises(InvalidInputError):
            laplacian(W)


class TestBuildViewGraphs:
    def test_one_graph_per_view(self):
        rng = np.random.default_rng(4)
        ds = MultiViewDataset(
            views=[rng.normal(size=(4, 20)), rng.normal(size=(6, 20))]
        )
        graphs = build_view_graphs(ds, k=3)
        assert len(graphs) == 2
        for g in graphs:
            assert g.W.shape == (20, 20)
            np.testing.assert_allclose(g.L, g.D - g.W)
