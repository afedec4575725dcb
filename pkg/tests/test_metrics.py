from itertools import permutations

import numpy as np
import pytest

from lesc.graph import Labeling
from lesc.metrics import ari, misclustering_error


class TestAri:
    def test_identical(self):
        assert ari([0, 0, 1, 1], [0, 0, 1, 1]) == 1.0

    def test_label_swap(self):
        assert ari([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0

    def test_hand_contingency(self):
        assert ari([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5)

    def test_symmetric(self):
        rng = np.random.default_rng(0)
        a = rng.integers(0, 3, size=50)
        b = rng.integers(0, 4, size=50)
        assert ari(a, b) == pytest.approx(ari(b, a))

    def test_accepts_labelings(self):
        a = Labeling(np.array([0, 0, 1, 1]), 2)
        assert ari(a, a) == 1.0

    def test_both_constant_convention(self):
        assert ari([0, 0, 0], [1, 1, 1]) == 1.0

    def test_one_constant_is_zero(self):
        assert ari([0, 0, 0, 0], [0, 1, 0, 1]) == 0.0

    def test_both_singletons(self):
        assert ari([0, 1, 2], [2, 0, 1]) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ari([0, 1], [0, 1, 1])

    def test_random_vs_structured_near_zero(self):
        rng = np.random.default_rng(1)
        truth = np.repeat([0, 1], 1000)
        pred = rng.integers(0, 2, size=2000)
        assert abs(ari(truth, pred)) <= 0.05


class TestMisclusteringError:
    def test_identical(self):
        assert misclustering_error([0, 0, 1, 1], [0, 0, 1, 1]) == 0

    def test_swap_permutation(self):
        assert misclustering_error([0, 0, 1, 1], [1, 1, 0, 0]) == 0

    def test_single_mismatch(self):
        assert misclustering_error([0, 0, 1, 1], [0, 1, 1, 1]) == 1

    def test_symmetric_for_equal_k(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a = rng.integers(0, 3, size=30)
            b = rng.integers(0, 3, size=30)
            assert misclustering_error(a, b) == misclustering_error(b, a)

    def test_bounded_by_length(self):
        rng = np.random.default_rng(3)
        a = rng.integers(0, 4, size=25)
        b = rng.integers(0, 4, size=25)
        assert 0 <= misclustering_error(a, b) <= 25

    def test_matches_permutation_enumeration(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            k = int(rng.integers(2, 5))
            a = rng.integers(0, k, size=20)
            b = rng.integers(0, k, size=20)
            brute = min(
                int((a != np.array(perm)[b]).sum())
                for perm in permutations(range(k))
            )
            assert misclustering_error(a, b) == brute

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            misclustering_error([0], [0, 1])
