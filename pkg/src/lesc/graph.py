"""Directed weighted graphs, flow statistics, and degree normalization.

A :class:`DirectedGraph` is immutable after construction and stores the
adjacency in both row (out-edges) and column (in-edges) CSR order, so all
read operations are cheap and safe to call from multiple threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

__all__ = [
    "DirectedGraph",
    "Labeling",
    "build_graph",
    "total_flow",
    "net_flow",
    "directed_count",
    "symmetric_normalize",
    "read_edge_list",
    "write_edge_list",
    "read_labels",
    "write_labels",
]


class DirectedGraph:
    """Sparse weighted directed graph with ``n`` vertices and no self-loops.

    Instances are built through :func:`build_graph` (or the file readers),
    which validates indices and aggregates duplicate edges.  ``adj`` holds
    the adjacency in out-edge (row) order, ``adj_t`` its transpose in
    in-edge order; both are canonical CSR with sorted indices, which fixes
    the per-row summation order used everywhere downstream.
    """

    __slots__ = ("n", "adj", "adj_t")

    def __init__(self, adj: sp.csr_matrix):
        adj = sp.csr_matrix(adj)
        adj.sum_duplicates()
        adj.sort_indices()
        self.n = adj.shape[0]
        self.adj = adj
        self.adj_t = adj.T.tocsr()
        self.adj_t.sort_indices()

    # -- basic accessors -------------------------------------------------

    @property
    def edge_count(self) -> int:
        """Number of stored directed edges."""
        return int(self.adj.nnz)

    @property
    def total_weight(self) -> float:
        """Sum of all edge weights (equals the edge count for 0/1 graphs)."""
        return float(self.adj.sum())

    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (src, dst, weight) arrays sorted by (src, dst)."""
        coo = self.adj.tocoo()
        return coo.row.copy(), coo.col.copy(), coo.data.copy()

    def out_degrees(self) -> np.ndarray:
        return np.asarray(self.adj.sum(axis=1)).ravel()

    def in_degrees(self) -> np.ndarray:
        return np.asarray(self.adj.sum(axis=0)).ravel()

    @property
    def is_binary(self) -> bool:
        """True when every stored weight is exactly 1."""
        return bool(np.all(self.adj.data == 1.0))

    @property
    def has_reciprocal(self) -> bool:
        """True when some pair has edges in both directions."""
        both = (self.adj != 0).multiply(self.adj_t != 0)
        return bool(both.nnz > 0)

    def subgraph(self, vertices: np.ndarray) -> "DirectedGraph":
        """Induced subgraph on the given vertex indices (in the given order)."""
        vertices = np.asarray(vertices, dtype=np.int64)
        return DirectedGraph(self.adj[vertices][:, vertices].tocsr())

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True, eq=False)
class Labeling:
    """Per-vertex community assignment with labels in ``0..k-1``."""

    assignments: np.ndarray
    k: int

    def __post_init__(self):
        a = np.asarray(self.assignments, dtype=np.int64)
        object.__setattr__(self, "assignments", a)
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if a.size and (a.min() < 0 or a.max() >= self.k):
            raise ValueError("labels must lie in 0..k-1")

    def __len__(self) -> int:
        return int(self.assignments.size)

    def sizes(self) -> np.ndarray:
        """Community sizes as a length-k array."""
        return np.bincount(self.assignments, minlength=self.k)

    def community(self, c: int) -> np.ndarray:
        """Vertex indices assigned to community ``c``."""
        return np.flatnonzero(self.assignments == c)

    def same_as(self, other: "Labeling") -> bool:
        return self.k == other.k and np.array_equal(
            self.assignments, other.assignments
        )


def build_graph(n: int, edges) -> DirectedGraph:
    """Build a graph from (src, dst[, weight]) triples.

    Duplicate (src, dst) entries are summed into a single weighted edge.
    Raises ValueError for out-of-range indices, self-loops, or negative or
    non-finite weights.
    """
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    edges = list(edges)
    if not edges:
        return DirectedGraph(sp.csr_matrix((n, n), dtype=np.float64))
    src = np.array([e[0] for e in edges], dtype=np.int64)
    dst = np.array([e[1] for e in edges], dtype=np.int64)
    w = np.array([e[2] if len(e) > 2 else 1.0 for e in edges], dtype=np.float64)
    if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
        raise ValueError("edge endpoint out of range")
    if np.any(src == dst):
        bad = int(src[src == dst][0])
        raise ValueError(f"self-loop at vertex {bad}")
    if np.any(w < 0):
        raise ValueError("negative edge weight")
    if not np.all(np.isfinite(w)):
        raise ValueError("non-finite edge weight")
    adj = sp.coo_matrix((w, (src, dst)), shape=(n, n)).tocsr()
    return DirectedGraph(adj)


def _two_sides(g: DirectedGraph, part: Labeling) -> tuple[np.ndarray, np.ndarray]:
    if part.k != 2:
        raise ValueError("bipartition statistics need a 2-community labeling")
    if len(part) != g.n:
        raise ValueError(
            f"labeling length {len(part)} does not match vertex count {g.n}"
        )
    mask = part.assignments == 0
    return (
        mask.astype(np.float64),
        (~mask).astype(np.float64),
    )


def total_flow(g: DirectedGraph, part: Labeling) -> float:
    """Total weight of edges crossing the bipartition, either direction."""
    x1, x2 = _two_sides(g, part)
    return float(x1 @ (g.adj @ x2) + x2 @ (g.adj @ x1))


def net_flow(g: DirectedGraph, part: Labeling) -> float:
    """Signed cross weight: community-0 to community-1 minus the reverse."""
    x1, x2 = _two_sides(g, part)
    return float(x1 @ (g.adj @ x2) - x2 @ (g.adj @ x1))


def directed_count(g: DirectedGraph, from_set, to_set) -> float:
    """Total weight of edges from `from_set` into `to_set`.

    The two vertex sets must be disjoint.  Together with its reverse this
    decomposes the total flow: count(F,T) + count(T,F) = total flow, and
    count(F,T) - count(T,F) = net flow.
    """
    f = np.asarray(from_set, dtype=np.int64)
    t = np.asarray(to_set, dtype=np.int64)
    if np.intersect1d(f, t).size:
        raise ValueError("from/to vertex sets overlap")
    ind_f = np.zeros(g.n)
    ind_t = np.zeros(g.n)
    ind_f[f] = 1.0
    ind_t[t] = 1.0
    return float(ind_f @ (g.adj @ ind_t))


def symmetric_normalize(g: DirectedGraph) -> DirectedGraph:
    """Rescale each edge weight by 1/sqrt(deg(u) * deg(v)).

    Degrees count incoming plus outgoing weight.  Vertices of degree zero
    have no incident edges, so no division by zero can occur for a stored
    positive weight; explicit zero weights stay zero.
    """
    deg = g.out_degrees() + g.in_degrees()
    with np.errstate(divide="ignore"):
        scale = np.where(deg > 0, 1.0 / np.sqrt(deg), 0.0)
    src, dst, w = g.edges()
    new_w = w * scale[src] * scale[dst]
    adj = sp.coo_matrix((new_w, (src, dst)), shape=(g.n, g.n)).tocsr()
    return DirectedGraph(adj)


# -- edge-list / labels file formats -------------------------------------

def write_edge_list(g: DirectedGraph, path) -> None:
    """Write the graph as 'src dst [weight]' lines with a header comment.

    The header records the vertex count so isolated trailing vertices
    survive a round trip.  The weight column is omitted when every weight
    is exactly 1.
    """
    src, dst, w = g.edges()
    binary = g.is_binary
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# vertices: {g.n}\n")
        fh.write(f"# edges: {g.edge_count}\n")
        if binary:
            for u, v in zip(src, dst):
                fh.write(f"{u} {v}\n")
        else:
            for u, v, wt in zip(src, dst, w):
                fh.write(f"{u} {v} {float(wt)!r}\n")


def read_edge_list(path, n: int | None = None) -> DirectedGraph:
    """Parse a whitespace-separated edge-list file.

    Lines starting with '#' are ignored, except that a leading
    '# vertices: N' header (as written by :func:`write_edge_list`) supplies
    the vertex count when ``n`` is not given.  Otherwise the count defaults
    to one past the largest index seen.
    """
    edges = []
    header_n = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if header_n is None and body.startswith("vertices:"):
                    header_n = int(body.split(":", 1)[1])
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 'src dst [weight]'")
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
            edges.append((u, v, w))
    if n is None:
        n = header_n
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return build_graph(n, edges)


def write_labels(part: Labeling, path) -> None:
    """Write one community id per line; line i is the label of vertex i."""
    with open(path, "w", encoding="utf-8") as fh:
        for c in part.assignments:
            fh.write(f"{c}\n")


def read_labels(path, k: int | None = None) -> Labeling:
    """Read a labels file; ``k`` defaults to one past the largest label."""
    labels = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            labels.append(int(line))
    arr = np.array(labels, dtype=np.int64)
    if k is None:
        k = int(arr.max()) + 1 if arr.size else 1
    return Labeling(arr, k)
