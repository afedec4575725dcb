import numpy as np
import pytest

from lesc.baselines import (
    BibSymOperator,
    UnimplementedMethodError,
    baseline_cluster,
    baseline_operator,
)
from lesc.dsbm import DsbmParams, sample_dsbm2
from lesc.eigensolver import EigenConfig
from lesc.graph import build_graph
from lesc.metrics import ari


def fast_eigen():
    return EigenConfig(tol=1e-6, max_iter=2000)


class TestOperators:
    def test_sym_is_a_plus_at(self):
        g = build_graph(3, [(0, 1), (2, 1)])
        dense = baseline_operator(g, "sym").to_dense()
        a = g.adj.toarray()
        assert np.allclose(dense, a + a.T)

    def test_herm_is_imaginary_skew(self):
        g = build_graph(3, [(0, 1), (2, 1)])
        dense = baseline_operator(g, "herm").to_dense()
        a = g.adj.toarray()
        assert np.allclose(dense, 1j * (a - a.T))

    def test_bibsym_matches_dense_products(self):
        rng = np.random.default_rng(1)
        g, _ = sample_dsbm2(DsbmParams((10, 10), 0.3, 0.2, 0.2), 4)
        op = baseline_operator(g, "bibsym")
        a = g.adj.toarray()
        dense = a @ a.T + a.T @ a
        for _ in range(5):
            x = rng.standard_normal(20) + 1j * rng.standard_normal(20)
            assert np.allclose(op.matvec(x), dense @ x)
        assert op.norm_bound() >= np.abs(np.linalg.eigvalsh(dense)).max() - 1e-9

    def test_all_operators_hermitian(self):
        rng = np.random.default_rng(2)
        g, _ = sample_dsbm2(DsbmParams((12, 12), 0.3, 0.2, 0.1), 9)
        for method in ("sym", "herm"):
            dense = baseline_operator(g, method).to_dense()
            assert np.allclose(dense, dense.conj().T)
        op = baseline_operator(g, "bibsym")
        x = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        y = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        assert np.vdot(x, op.matvec(y)) == pytest.approx(
            np.conj(np.vdot(y, op.matvec(x))))

    def test_unimplemented_methods_named(self):
        g = build_graph(2, [(0, 1)])
        for name in ("disim", "dscore", "simpherm", "hermrw"):
            with pytest.raises(UnimplementedMethodError, match=name):
                baseline_operator(g, name)

    def test_unknown_method(self):
        g = build_graph(2, [(0, 1)])
        with pytest.raises(ValueError, match="unknown"):
            baseline_operator(g, "magic")


class TestBaselineCluster:
    def test_herm_strong_at_low_noise(self):
        params = DsbmParams((300, 300), 0.03, 0.03, 0.05)
        scores = []
        for seed in range(3):
            g, truth = sample_dsbm2(params, seed)
            pred = baseline_cluster(g, "herm", 2, eigen=fast_eigen(), seed=seed)
            scores.append(ari(truth, pred))
        assert np.mean(scores) >= 0.8

    def test_sym_blind_to_directions(self):
        params = DsbmParams((300, 300), 0.03, 0.03, 0.05)
        scores = []
        for seed in range(3):
            g, truth = sample_dsbm2(params, seed)
            pred = baseline_cluster(g, "sym", 2, eigen=fast_eigen(), seed=seed)
            scores.append(ari(truth, pred))
        assert np.mean(scores) <= 0.05

    def test_herm_invariant_to_full_edge_reversal(self):
        params = DsbmParams((150, 150), 0.05, 0.05, 0.05)
        g, _ = sample_dsbm2(params, 11)
        src, dst, w = g.edges()
        rev = build_graph(g.n, list(zip(dst, src, w)))
        a = baseline_cluster(g, "herm", 2, eigen=fast_eigen(), seed=3)
        b = baseline_cluster(rev, "herm", 2, eigen=fast_eigen(), seed=3)
        assert ari(a, b) == 1.0

    def test_deterministic(self):
        g, _ = sample_dsbm2(DsbmParams((60, 60), 0.1, 0.05, 0.1), 2)
        a = baseline_cluster(g, "bibsym", 3, eigen=fast_eigen(), seed=8)
        b = baseline_cluster(g, "bibsym", 3, eigen=fast_eigen(), seed=8)
        assert np.array_equal(a.assignments, b.assignments)

    def test_unimplemented_raises_before_work(self):
        g = build_graph(4, [(0, 1)])
        with pytest.raises(UnimplementedMethodError):
            baseline_cluster(g, "dscore", 2)
