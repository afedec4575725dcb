import numpy as np
import pytest

from lesc.kmeans import KmeansConfig, kmeans_plane
from lesc.metrics import ari


class TestKmeansPlane:
    def test_separated_duplicates(self):
        pts = np.array([[0.0, 0.0]] * 5 + [[1.0, 1.0]] * 5)
        res = kmeans_plane(pts, 2, KmeansConfig(seed=0))
        assert res.cost == 0.0
        labels = res.labeling.assignments
        assert len(set(labels[:5])) == 1 and len(set(labels[5:])) == 1
        assert labels[0] != labels[5]

    def test_k1_is_mean_and_variance(self):
        rng = np.random.default_rng(2)
        pts = rng.standard_normal((40, 2))
        res = kmeans_plane(pts, 1, KmeansConfig(seed=0))
        assert np.allclose(res.centroids[0], pts.mean(axis=0))
        expected_cost = ((pts - pts.mean(axis=0)) ** 2).sum()
        assert res.cost == pytest.approx(expected_cost)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(3)
        pts = np.concatenate([
            rng.standard_normal((30, 2)) * 0.2,
            rng.standard_normal((30, 2)) * 0.2 + [3.0, 1.0],
        ])
        theta = rng.uniform(0, 2 * np.pi)
        rot = np.array([[np.cos(theta), -np.sin(theta)],
                        [np.sin(theta), np.cos(theta)]])
        cfg = KmeansConfig(seed=7)
        a = kmeans_plane(pts, 2, cfg).labeling
        b = kmeans_plane(pts @ rot.T, 2, cfg).labeling
        assert ari(a, b) == 1.0

    def test_more_iterations_never_cost_more(self):
        rng = np.random.default_rng(4)
        pts = rng.standard_normal((60, 2))
        short = kmeans_plane(pts, 3, KmeansConfig(restarts=1, max_iter=1, seed=5))
        long = kmeans_plane(pts, 3, KmeansConfig(restarts=1, max_iter=100, seed=5))
        assert long.cost <= short.cost + 1e-12

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        pts = rng.standard_normal((50, 2))
        r1 = kmeans_plane(pts, 2, KmeansConfig(seed=9))
        r2 = kmeans_plane(pts, 2, KmeansConfig(seed=9))
        assert r1.cost == r2.cost
        assert np.array_equal(r1.labeling.assignments, r2.labeling.assignments)

    def test_best_restart_selected(self):
        rng = np.random.default_rng(6)
        pts = np.concatenate([
            rng.standard_normal((20, 2)) * 0.1,
            rng.standard_normal((20, 2)) * 0.1 + [5.0, 0.0],
            rng.standard_normal((20, 2)) * 0.1 + [0.0, 5.0],
        ])
        many = kmeans_plane(pts, 3, KmeansConfig(restarts=10, seed=1))
        one = kmeans_plane(pts, 3, KmeansConfig(restarts=1, seed=1))
        assert many.cost <= one.cost + 1e-12

    def test_too_few_points(self):
        with pytest.raises(ValueError, match="points"):
            kmeans_plane(np.zeros((2, 2)), 3)

    def test_identical_points_degenerate(self):
        pts = np.zeros((6, 2))
        res = kmeans_plane(pts, 2, KmeansConfig(seed=0))
        assert res.cost == 0.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            KmeansConfig(restarts=0)
