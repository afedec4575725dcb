"""Samplers for two-community and meta-graph directed stochastic block models.

Reproducibility contract: every unordered vertex pair (u, v) with u < v owns
one substream of a counter-based generator, indexed by the pair's position in
lexicographic order.  A single uniform draw per pair decides jointly whether
an edge exists and its direction, so the sampled edge list is bitwise
identical for a fixed seed regardless of how pairs are batched or
parallelized.  Reciprocal pairs are never generated.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .graph import DirectedGraph, Labeling, build_graph

__all__ = [
    "DsbmParams",
    "MetaGraph",
    "sample_dsbm2",
    "sample_dsbm_meta",
    "pair_uniforms",
]


@dataclass(frozen=True)
class DsbmParams:
    """Generative parameters: community sizes, edge densities, direction noise."""

    sizes: tuple
    p: float
    q: float
    eta: float

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes or any(s <= 0 for s in sizes):
            raise ValueError("community sizes must be positive")
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.q <= 1.0):
            raise ValueError("edge probabilities must lie in [0, 1]")
        if not (0.0 <= self.eta <= 0.5):
            raise ValueError("direction noise eta must lie in [0, 0.5]")

    @property
    def n_total(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True)
class MetaGraph:
    """Community-level orientation graph.

    An oriented pair (a, b) means cross edges between communities a and b
    point a -> b with probability 1 - eta.  Unordered pairs without an entry
    get a uniformly random direction.
    """

    k: int
    oriented_pairs: tuple

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.oriented_pairs)
        object.__setattr__(self, "oriented_pairs", pairs)
        seen = set()
        for a, b in pairs:
            if a == b:
                raise ValueError("meta-graph edges must join distinct communities")
            if not (0 <= a < self.k and 0 <= b < self.k):
                raise ValueError("meta-graph community id out of range")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"both orientations given for communities {a},{b}")
            seen.add(key)

    def forward_prob(self, a: int, b: int, eta: float) -> float:
        """Probability that a cross edge in pair (a, b) points a -> b."""
        if (a, b) in self.oriented_pairs:
            return 1.0 - eta
        if (b, a) in self.oriented_pairs:
            return eta
        return 0.5

    def to_json(self) -> str:
        return json.dumps(
            {"k": self.k, "oriented_pairs": [list(p) for p in self.oriented_pairs]}
        )

    @classmethod
    def from_json(cls, text: str) -> "MetaGraph":
        obj = json.loads(text)
        return cls(k=int(obj["k"]), oriented_pairs=tuple(
            (int(a), int(b)) for a, b in obj.get("oriented_pairs", [])
        ))


_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / float(1 << 53)


def _mix64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; uint64 arithmetic wraps mod 2**64
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def pair_uniforms(seed: int, indices: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) draws for the given substream indices.

    Draw i is position i of the splitmix64 stream keyed by ``seed``; it
    depends only on (seed, i), which is what makes per-pair substreams
    order- and batch-independent.
    """
    key = _mix64(np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF)]))[0]
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix64(key + (idx + np.uint64(1)) * _GAMMA)
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


def sample_dsbm_meta(
    params: DsbmParams, meta: MetaGraph, seed: int
) -> tuple[DirectedGraph, Labeling]:
    """Sample one graph from the meta-graph DSBM.

    Vertices are ordered by community (community 0 first).  Intra-community
    pairs get an edge with probability p, direction uniform; a cross pair in
    communities (a, b) gets an edge with probability q, oriented a -> b with
    the meta-graph's forward probability.

    Returns the graph together with the planted labeling.
    """
    if meta.k != params.k:
        raise ValueError(
            f"meta-graph has {meta.k} communities, params have {params.k}"
        )
    n = params.n_total
    labels = np.repeat(np.arange(params.k), params.sizes)
    p, q, eta = params.p, params.q, params.eta

    # per-(community a, community b) thresholds on the single pair uniform:
    # x < fwd[a,b] puts the edge u->v, fwd[a,b] <= x < edge[a,b] puts v->u
    fwd = np.empty((params.k, params.k))
    edge = np.empty((params.k, params.k))
    for a in range(params.k):
        for b in range(params.k):
            if a == b:
                fwd[a, b] = p / 2.0
                edge[a, b] = p
            else:
                fwd[a, b] = meta.forward_prob(a, b, eta) * q
                edge[a, b] = q

    src_parts = []
    dst_parts = []
    base = 0  # lexicographic index of pair (u, u+1)
    for u in range(n - 1):
        m = n - 1 - u
        x = pair_uniforms(seed, base + np.arange(m))
        cu = labels[u]
        cv = labels[u + 1:]
        t_fwd = fwd[cu, cv]
        t_edge = edge[cu, cv]
        fwd_hit = x < t_fwd
        bwd_hit = (~fwd_hit) & (x < t_edge)
        vs = np.arange(u + 1, n)
        if fwd_hit.any():
            src_parts.append(np.full(int(fwd_hit.sum()), u, dtype=np.int64))
            dst_parts.append(vs[fwd_hit])
        if bwd_hit.any():
            src_parts.append(vs[bwd_hit])
            dst_parts.append(np.full(int(bwd_hit.sum()), u, dtype=np.int64))
        base += m

    if src_parts:
        src = np.concatenate(src_parts)
        dst = np.concatenate(dst_parts)
        g = build_graph(n, zip(src.tolist(), dst.tolist()))
    else:
        g = build_graph(n, [])
    return g, Labeling(labels, params.k)


def sample_dsbm2(params: DsbmParams, seed: int) -> tuple[DirectedGraph, Labeling]:
    """Sample the two-community source/sink DSBM.

    Cross edges point from community 0 to community 1 with probability
    1 - eta; equivalent to the meta-graph sampler with the single oriented
    pair (0, 1), and bitwise identical to it for the same seed.
    """
    if params.k != 2:
        raise ValueError("two-community sampler needs exactly two sizes")
    meta = MetaGraph(k=2, oriented_pairs=((0, 1),))
    return sample_dsbm_meta(params, meta, seed)
