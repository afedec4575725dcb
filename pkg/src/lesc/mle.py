"""Likelihood weights, the Hermitian operator, and exact small-n search.

The central object is a complex Hermitian matrix assembled from a directed
graph and three scalar weights,

    H = w_r (A + A^T) + i w_i (A - A^T) + w_c (J - I),

whose quadratic form over {1, i}-valued indicator vectors scores a
bipartition exactly like the block-model log-likelihood does.  H is kept
matrix-free: a sparse part covering the edges plus the rank-one all-ones
term and its diagonal correction, so applying it costs O(|E| + N).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, log

import numpy as np
import scipy.sparse as sp

from .graph import DirectedGraph, Labeling, total_flow

__all__ = [
    "MleWeights",
    "HermitianOperator",
    "ETA_FLOOR",
    "clamp_params",
    "mle_weights",
    "build_operator",
    "apply_operator",
    "indicator_vector",
    "quadratic_form",
    "log_likelihood",
    "exhaustive_mle",
]

ETA_FLOOR = 1e-4


def clamp_params(p: float, q: float, eta: float, n: int) -> tuple[float, float, float]:
    """Clamp model parameters away from the log singularities at 0 and 1.

    Edge probabilities are floored at one expected edge over the n(n-1)
    ordered pairs; eta is clamped to [ETA_FLOOR, 0.5].
    """
    if n < 2:
        raise ValueError("clamping needs at least two vertices")
    floor = 1.0 / (n * (n - 1))
    p = min(max(p, floor), 1.0 - floor)
    q = min(max(q, floor), 1.0 - floor)
    eta = min(max(eta, ETA_FLOOR), 0.5)
    return p, q, eta


@dataclass(frozen=True)
class MleWeights:
    """The three scalar weights of the Hermitian representation.

    w_r scales the symmetric part A + A^T, w_i the skew part i(A - A^T),
    w_c the all-ones term J - I.  For clamped parameters all three are
    finite; w_i >= 0 whenever eta <= 0.5 and w_c = 0 exactly when p = q.
    """

    w_r: float
    w_i: float
    w_c: float


def mle_weights(p: float, q: float, eta: float) -> MleWeights:
    """Weights of the likelihood-derived Hermitian matrix.

    Callers are expected to pass clamped parameters (see
    :func:`clamp_params`); the logs diverge at 0 and 1.
    """
    w_i = log((1.0 - eta) / eta)
    w_r = log(
        (p * p * (1.0 - q) * (1.0 - q))
        / (4.0 * eta * (1.0 - eta) * q * q * (1.0 - p) * (1.0 - p))
    )
    w_c = 2.0 * log((1.0 - p) / (1.0 - q))
    return MleWeights(w_r=w_r, w_i=w_i, w_c=w_c)


class HermitianOperator:
    """Matrix-free Hermitian operator: sparse + rank-one + diagonal shift.

    Attributes
    ----------
    sym : CSR, the weighted symmetric part w_r (A + A^T)
    skew : CSR, the weighted skew part w_i (A - A^T); enters as i * skew
    ones_coeff : coefficient of the all-ones matrix J (equals w_c)
    diag_shift : diagonal correction -w_c making the J - I term exact
    """

    __slots__ = ("n", "sym", "skew", "ones_coeff", "diag_shift", "_compact")

    def __init__(self, sym: sp.csr_matrix, skew: sp.csr_matrix,
                 ones_coeff: float, diag_shift: float):
        self.n = sym.shape[0]
        self.sym = sym
        self.skew = skew
        self.ones_coeff = float(ones_coeff)
        self.diag_shift = float(diag_shift)
        compact = (sym + 1j * skew).tocsr()
        compact.sum_duplicates()
        compact.eliminate_zeros()
        compact.sort_indices()
        self._compact = compact

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Apply the operator to a complex vector in O(|E| + N)."""
        if x.shape != (self.n,):
            raise ValueError(f"vector length {x.shape} does not match n={self.n}")
        y = self._compact @ x.astype(np.complex128, copy=False)
        if self.ones_coeff != 0.0 or self.diag_shift != 0.0:
            y += self.ones_coeff * x.sum()
            y += self.diag_shift * x
        return y

    def norm_bound(self) -> float:
        """Gershgorin-style upper bound on the spectral norm (max row abs sum)."""
        if self.n == 0:
            return 0.0
        rows = np.asarray(abs(self._compact).sum(axis=1)).ravel()
        return float(rows.max(initial=0.0) + abs(self.ones_coeff) * (self.n - 1))

    def to_dense(self) -> np.ndarray:
        """Dense N x N matrix; intended for oracle checks at small N."""
        if self.n > 2000:
            raise ValueError("dense materialization capped at N=2000")
        h = self._compact.toarray()
        if self.ones_coeff != 0.0:
            h = h + self.ones_coeff * (np.ones((self.n, self.n)) - np.eye(self.n))
        return h


def build_operator(g: DirectedGraph, w: MleWeights) -> HermitianOperator:
    """Assemble the Hermitian operator for a graph and weight triple."""
    a = g.adj
    at = g.adj_t
    sym = (w.w_r * (a + at)).tocsr()
    skew = (w.w_i * (a - at)).tocsr()
    return HermitianOperator(sym, skew, ones_coeff=w.w_c, diag_shift=-w.w_c)


def apply_operator(op: HermitianOperator, x: np.ndarray) -> np.ndarray:
    return op.matvec(x)


def indicator_vector(part: Labeling) -> np.ndarray:
    """Complex indicator: i for community 0, 1 for community 1."""
    if part.k != 2:
        raise ValueError("indicator vector is defined for 2-community labelings")
    return np.where(part.assignments == 0, 1j, 1.0 + 0j)


def quadratic_form(g: DirectedGraph, w: MleWeights, part: Labeling) -> float:
    """Evaluate x* H x for the {1, i} indicator of the bipartition.

    Equals w_r (2|E| - 2 TF) + 2 w_i NF + w_c (|C1|^2 + |C2|^2 - N) up to
    floating-point roundoff; the quadratic form of a Hermitian matrix is
    real, so only the real part is returned.
    """
    if len(part) != g.n:
        raise ValueError("labeling length does not match vertex count")
    op = build_operator(g, w)
    x = indicator_vector(part)
    return float(np.vdot(x, op.matvec(x)).real)


def _likelihood_counts(g: DirectedGraph, part: Labeling):
    """(intra_edges, fwd, bwd, n_same_pairs, n_cross_pairs) for a bipartition."""
    sizes = part.sizes()
    s0, s1 = int(sizes[0]), int(sizes[1])
    tf = total_flow(g, part)
    mask0 = (part.assignments == 0).astype(np.float64)
    mask1 = 1.0 - mask0
    fwd = float(mask0 @ (g.adj @ mask1))
    bwd = tf - fwd
    intra = g.total_weight - tf
    return intra, fwd, bwd, comb(s0, 2) + comb(s1, 2), s0 * s1


def log_likelihood(g: DirectedGraph, part: Labeling, p: float, q: float,
                   eta: float) -> float:
    """Exact log-probability of a binary graph under a candidate bipartition.

    Sums log P(A_uv | labels) over unordered pairs: within-community pairs
    contribute log(p/2) per edge and log(1-p) per non-edge; cross pairs
    contribute log((1-eta) q) for a community-0 -> community-1 edge,
    log(eta q) for the reverse, and log(1-q) for a non-edge.  Parameters
    are clamped internally.  Weighted graphs and graphs with reciprocal
    pairs are rejected: the generative model produces neither.
    """
    if len(part) != g.n:
        raise ValueError("labeling length does not match vertex count")
    if not g.is_binary:
        raise ValueError("log-likelihood is defined for 0/1 edge weights only")
    if g.has_reciprocal:
        raise ValueError("graph has a reciprocal edge pair; model excludes these")
    p, q, eta = clamp_params(p, q, eta, g.n)
    intra, fwd, bwd, n_same, n_cross = _likelihood_counts(g, part)
    return (
        intra * log(p / 2.0)
        + (n_same - intra) * log(1.0 - p)
        + fwd * log((1.0 - eta) * q)
        + bwd * log(eta * q)
        + (n_cross - fwd - bwd) * log(1.0 - q)
    )


def exhaustive_mle(g: DirectedGraph, p: float, q: float, eta: float,
                   max_n: int = 20) -> Labeling:
    """Maximize :func:`log_likelihood` over all 2^n bipartitions.

    Labelings are encoded as integers with bit u holding the label of
    vertex u; ties go to the smallest encoding.  The winner is returned
    with vertex 0 in community 0 (flipping all labels if needed), which
    fixes the inherent two-fold relabeling freedom.
    Only feasible for small n; refuses n > ``max_n``.
    """
    n = g.n
    if n > max_n:
        raise ValueError(f"exhaustive search over 2^{n} labelings refused (n > {max_n})")
    if n < 2:
        raise ValueError("need at least two vertices")
    if not g.is_binary:
        raise ValueError("log-likelihood is defined for 0/1 edge weights only")
    if g.has_reciprocal:
        raise ValueError("graph has a reciprocal edge pair; model excludes these")
    p, q, eta = clamp_params(p, q, eta, g.n)
    src, dst, _ = g.edges()

    lg_intra = log(p / 2.0)
    lg_no_intra = log(1.0 - p)
    lg_fwd = log((1.0 - eta) * q)
    lg_bwd = log(eta * q)
    lg_no_cross = log(1.0 - q)

    bits = np.arange(n, dtype=np.uint64)
    best_value = -np.inf
    best_code = 0
    chunk = 1 << 14
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n), dtype=np.uint64)
        lab = ((codes[:, None] >> bits[None, :]) & np.uint64(1)).astype(np.int8)
        s1 = lab.sum(axis=1, dtype=np.int64)
        s0 = n - s1
        n_same = s0 * (s0 - 1) // 2 + s1 * (s1 - 1) // 2
        n_cross = s0 * s1
        if len(src):
            ls = lab[:, src]
            ld = lab[:, dst]
            intra = (ls == ld).sum(axis=1, dtype=np.int64)
            fwd = ((ls == 0) & (ld == 1)).sum(axis=1, dtype=np.int64)
            bwd = ((ls == 1) & (ld == 0)).sum(axis=1, dtype=np.int64)
        else:
            intra = fwd = bwd = np.zeros(len(codes), dtype=np.int64)
        value = (
            intra * lg_intra
            + (n_same - intra) * lg_no_intra
            + fwd * lg_fwd
            + bwd * lg_bwd
            + (n_cross - fwd - bwd) * lg_no_cross
        )
        i = int(np.argmax(value))
        if value[i] > best_value:
            best_value = float(value[i])
            best_code = int(codes[i])

    assignments = np.array(
        [(best_code >> u) & 1 for u in range(n)], dtype=np.int64
    )
    if assignments[0] == 1:
        assignments = 1 - assignments
    return Labeling(assignments, 2)
