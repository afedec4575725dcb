"""Clustering quality measures: adjusted Rand index and misclustering error."""
from __future__ import annotations

from math import comb

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import Labeling

__all__ = ["ari", "misclustering_error"]


def _as_labels(x) -> np.ndarray:
    if isinstance(x, Labeling):
        return x.assignments
    return np.asarray(x, dtype=np.int64)


def _contingency(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    ka = ai.max() + 1 if ai.size else 0
    kb = bi.max() + 1 if bi.size else 0
    table = np.zeros((ka, kb), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def ari(truth, pred) -> float:
    """Adjusted Rand index between two labelings, in [-1, 1].

    Chance-corrected pair-counting agreement; symmetric and invariant to
    relabeling either side.  The formula degenerates to 0/0 only when both
    partitions are trivial (both one block, or both all singletons), where
    the partitions coincide and the index is defined as 1.  One constant
    labeling against a non-constant one comes out 0 from the formula
    itself.
    """
    a = _as_labels(truth)
    b = _as_labels(pred)
    if a.shape != b.shape:
        raise ValueError("labelings must have equal length")
    n = a.size
    if n < 2:
        return 1.0
    table = _contingency(a, b)
    sum_cells = sum(comb(int(x), 2) for x in table.ravel())
    sum_rows = sum(comb(int(x), 2) for x in table.sum(axis=1))
    sum_cols = sum(comb(int(x), 2) for x in table.sum(axis=0))
    total = comb(n, 2)
    expected = sum_rows * sum_cols / total
    maximum = (sum_rows + sum_cols) / 2.0
    if maximum == expected:
        return 1.0
    return float((sum_cells - expected) / (maximum - expected))


def misclustering_error(truth, pred) -> int:
    """Minimum Hamming distance over relabelings of the prediction.

    The best label matching is the optimal assignment on the confusion
    matrix (equivalent to enumerating permutations, and exact also when
    the two labelings use different numbers of labels).
    """
    a = _as_labels(truth)
    b = _as_labels(pred)
    if a.shape != b.shape:
        raise ValueError("labelings must have equal length")
    if a.size == 0:
        return 0
    table = _contingency(a, b)
    rows, cols = linear_sum_assignment(table, maximize=True)
    matched = int(table[rows, cols].sum())
    return int(a.size - matched)
