import numpy as np
import pytest

from lesc.dsbm import DsbmParams, sample_dsbm2
from lesc.eigensolver import dense_top_eigenpair
from lesc.mle import build_operator, clamp_params, mle_weights
from lesc.theory import (
    centroid_distance,
    concentration_constant,
    eigengap_delta,
    error_bound,
    l_eta,
    population_matrix,
    population_summary,
)

# frozen 50-digit evaluations of the closed-form curve
L_ETA_ORACLE = {
    0.01: 2.3015285897292678371,
    0.1: 1.2864454703699322102,
    0.25: 0.46636925238859155925,
    0.4: 0.072679625389654651668,
}


def dense_gap(matrix):
    """Separation of the largest-magnitude eigenvalue from the rest."""
    vals = np.linalg.eigvalsh(matrix)
    top = int(np.argmax(np.abs(vals)))
    others = np.delete(vals, top)
    return float(np.abs(vals[top] - others).min())


def random_point(rng, n):
    p = float(rng.uniform(0.05, 0.6))
    q = float(rng.uniform(0.05, 0.6))
    eta = float(rng.uniform(0.0, 0.5))
    return clamp_params(p, q, eta, n)


class TestPopulationMatrix:
    def test_two_by_two_matches_direct_expectation(self):
        n1 = n2 = 1
        p = q = 0.4
        eta = 0.5
        pc, qc, ec = clamp_params(p, q, eta, 2)
        w = mle_weights(pc, qc, ec)
        b = w.w_r * qc + w.w_c + 1j * w.w_i * (1 - 2 * ec) * qc
        expected = np.array([[0, b], [np.conj(b), 0]])
        assert np.allclose(population_matrix(n1, n2, p, q, eta), expected)

    def test_monte_carlo_mean_converges(self):
        n1 = n2 = 20
        p, q, eta = 0.3, 0.15, 0.2
        pc, qc, ec = clamp_params(p, q, eta, 40)
        w = mle_weights(pc, qc, ec)
        samples = np.empty((500, 40, 40), dtype=complex)
        for s in range(500):
            g, _ = sample_dsbm2(DsbmParams((n1, n2), p, q, eta), seed=s)
            samples[s] = build_operator(g, w).to_dense()
        mean = samples.mean(axis=0)
        se = samples.std(axis=0, ddof=1) / np.sqrt(500)
        target = population_matrix(n1, n2, p, q, eta)
        off = ~np.eye(40, dtype=bool)
        diff = np.abs(mean - target)
        assert np.all(diff[off] <= 5 * np.abs(se[off]) + 1e-12)

    def test_top_eigenvector_two_values(self):
        m = population_matrix(4, 4, 0.3, 0.1, 0.1)
        _, vec = dense_top_eigenpair(m, "magnitude")
        assert np.abs(vec[:4] - vec[0]).max() < 1e-10
        assert np.abs(vec[4:] - vec[4]).max() < 1e-10
        assert abs(vec[0] - vec[4]) > 1e-3

    def test_size_cap(self):
        with pytest.raises(ValueError, match="capped"):
            population_matrix(1500, 1500, 0.1, 0.1, 0.1)


class TestEigengap:
    def test_balanced_homogeneous_closed_form(self):
        n1 = n2 = 50
        p = 0.2
        eta = 0.1
        w = mle_weights(p, p, eta)
        expected = (100 * p / 2) * np.sqrt(
            w.w_r ** 2 + w.w_i ** 2 * (1 - 2 * eta) ** 2
        )
        assert eigengap_delta(n1, n2, p, p, eta) == pytest.approx(expected, rel=1e-12)

    def test_max_noise_homogeneous(self):
        # w_i term vanishes; with p=q also w_r = 0, so the gap closes
        assert eigengap_delta(50, 50, 0.2, 0.2, 0.5) == pytest.approx(0.0, abs=1e-12)

    def test_bracket_against_dense_gap(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            n1 = int(rng.integers(5, 60))
            n2 = int(rng.integers(5, 60))
            p, q, eta = random_point(rng, n1 + n2)
            delta = eigengap_delta(n1, n2, p, q, eta)
            gap = dense_gap(population_matrix(n1, n2, p, q, eta))
            assert delta <= gap + 1e-9 * max(1.0, gap)
            assert gap <= 2 * delta + 1e-9 * max(1.0, delta)


class TestCentroidDistance:
    def test_balanced_homogeneous_closed_form(self):
        n1 = n2 = 100
        p = 0.3
        eta = 0.15
        w = mle_weights(p, p, eta)
        theta = np.arccos(w.w_r / abs(w.w_r + 1j * w.w_i * (1 - 2 * eta)))
        expected = np.sqrt(4 * np.sin(theta / 2) ** 2 / 200)
        assert centroid_distance(n1, n2, p, p, eta) == pytest.approx(expected, rel=1e-12)

    def test_max_noise_limit(self):
        # approaching eta = 0.5 with p = q the cross-entry angle tends to
        # atan(2): d stabilizes near 2 sin(atan(2)/2)/sqrt(N) instead of
        # vanishing; the signal disappears through the eigengap, and at
        # exactly 0.5 the zero core makes d degenerate (convention: 0)
        limit = 2 * np.sin(np.arctan(2.0) / 2) / np.sqrt(80)
        assert centroid_distance(40, 40, 0.2, 0.2, 0.4999) == pytest.approx(
            limit, rel=1e-3)
        assert centroid_distance(40, 40, 0.2, 0.2, 0.5) == 0.0
        assert population_summary(40, 40, 0.2, 0.2, 0.5).degenerate_core
        assert eigengap_delta(40, 40, 0.2, 0.2, 0.4999) < 1e-4

    def test_matches_dense_top_eigenvector_values(self):
        rng = np.random.default_rng(19)
        for _ in range(10):
            n1 = int(rng.integers(20, 80))
            n2 = int(rng.integers(20, 80))
            p, q, eta = random_point(rng, n1 + n2)
            m = population_matrix(n1, n2, p, q, eta)
            _, vec = dense_top_eigenpair(m, "magnitude")
            d_dense = abs(vec[0] - vec[n1])
            d = centroid_distance(n1, n2, p, q, eta)
            assert d == pytest.approx(d_dense, abs=1e-9)


class TestLEta:
    def test_zero_at_max_noise(self):
        assert l_eta(0.5) == 0.0

    def test_frozen_oracle_points(self):
        for eta, val in L_ETA_ORACLE.items():
            assert l_eta(eta) == pytest.approx(val, rel=1e-12)

    def test_strictly_decreasing(self):
        grid = np.linspace(0.01, 0.5, 100)
        vals = [l_eta(float(e)) for e in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_continuity(self):
        for eta in np.linspace(0.02, 0.49, 30):
            assert abs(l_eta(float(eta)) - l_eta(float(eta) + 1e-6)) <= 1e-3

    def test_domain(self):
        with pytest.raises(ValueError):
            l_eta(0.0)
        with pytest.raises(ValueError):
            l_eta(0.6)


class TestErrorBound:
    def test_definition_identity(self):
        n1, n2 = 400, 600
        p, q, eta, eps = 0.05, 0.03, 0.2, 1.0
        pc, qc, _ = clamp_params(p, q, eta, n1 + n2)
        c = concentration_constant(n1, n2, p, q, eta, eps)
        d = centroid_distance(n1, n2, p, q, eta)
        delta = eigengap_delta(n1, n2, p, q, eta)
        expected = 64 * (2 + eps) * c * c * max(pc, qc) * np.log(n1 + n2) / (
            d * d * delta * delta
        )
        assert error_bound(n1, n2, p, q, eta, eps) == pytest.approx(expected, rel=1e-12)

    def test_diverges_when_centroids_merge(self):
        assert error_bound(500, 500, 0.1, 0.1, 0.5) == np.inf

    def test_scaling_matches_balanced_shape(self):
        # bound(N) tracks log(N) / (N p L^2) within a factor of 2 once
        # N p well exceeds log N
        p, eta = 0.05, 0.1
        ratios = []
        for n in (10 ** 3, 10 ** 4, 10 ** 5):
            b = error_bound(n // 2, n // 2, p, p, eta)
            shape = np.log(n) / (n * p * l_eta(eta) ** 2)
            ratios.append(b / shape)
        assert max(ratios) / min(ratios) <= 2.0

    def test_summary_consistent(self):
        s = population_summary(300, 200, 0.2, 0.1, 0.2)
        assert s.delta == pytest.approx(eigengap_delta(300, 200, 0.2, 0.1, 0.2))
        assert s.centroid_distance == pytest.approx(
            centroid_distance(300, 200, 0.2, 0.1, 0.2))
        assert s.bound == pytest.approx(error_bound(300, 200, 0.2, 0.1, 0.2))
        assert s.lambda1 >= s.lambda2
        assert not s.degenerate_core
