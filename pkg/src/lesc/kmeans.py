"""Planar k-means with k-means++ seeding and multiple restarts.

Only the two-dimensional case is needed: vertex embeddings are the real and
imaginary parts of a complex eigenvector, so clustering must be invariant
under any global rotation of the plane (the eigenvector phase is arbitrary).
Everything here depends on points only through pairwise distances, which
gives that invariance for free.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Labeling

__all__ = ["KmeansConfig", "KmeansResult", "kmeans_plane"]


@dataclass(frozen=True)
class KmeansConfig:
    restarts: int = 10
    max_iter: int = 100
    seed: int = 0
    tol: float = 1e-10

    def __post_init__(self):
        if self.restarts < 1 or self.max_iter < 1 or self.tol <= 0:
            raise ValueError("restarts, max_iter, and tol must be positive")


@dataclass(frozen=True)
class KmeansResult:
    labeling: Labeling
    centroids: np.ndarray
    cost: float
    restart: int


def _weighted_index(rng: np.random.Generator, weights: np.ndarray) -> int:
    """Sample an index with probability proportional to weights.

    Falls back to uniform when all weights vanish (duplicated points).
    Inverse-CDF form keeps the draw deterministic for a given generator
    state without normalization fuss.
    """
    total = float(weights.sum())
    if total <= 0.0:
        return int(rng.integers(len(weights)))
    r = rng.random() * total
    idx = int(np.searchsorted(np.cumsum(weights), r, side="right"))
    return min(idx, len(weights) - 1)


def _seed_plusplus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centroids = np.empty((k, 2))
    centroids[0] = points[int(rng.integers(n))]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        centroids[j] = points[_weighted_index(rng, d2)]
        d2 = np.minimum(d2, ((points - centroids[j]) ** 2).sum(axis=1))
    return centroids


def _assign(points: np.ndarray, centroids: np.ndarray):
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)  # ties resolve to the lowest index
    return labels, d2


def _lloyd(points: np.ndarray, centroids: np.ndarray, max_iter: int, tol: float):
    k = centroids.shape[0]
    labels = None
    for _ in range(max_iter):
        labels, d2 = _assign(points, centroids)
        # reseed empty clusters to the point farthest from their centroid
        for repair in range(k):
            counts = np.bincount(labels, minlength=k)
            empty = np.flatnonzero(counts == 0)
            if empty.size == 0:
                break
            j = int(empty[0])
            far = int(np.argmax(((points - centroids[j]) ** 2).sum(axis=1)))
            centroids[j] = points[far]
            labels, d2 = _assign(points, centroids)
        new_centroids = centroids.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new_centroids[j] = points[members].mean(axis=0)
        shift = float(np.abs(new_centroids - centroids).max())
        centroids = new_centroids
        if shift <= tol:
            break
    labels, d2 = _assign(points, centroids)
    cost = float(d2[np.arange(len(labels)), labels].sum())
    return labels, centroids, cost


def kmeans_plane(points, k: int, cfg: KmeansConfig = KmeansConfig()) -> KmeansResult:
    """Best-of-restarts Lloyd's algorithm on points in the plane.

    Each restart draws k-means++ seeds from its own substream of the
    config seed; the winner is the restart with the smallest (cost,
    restart index) pair, so results do not depend on evaluation order.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    n = pts.shape[0]
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < k:
        raise ValueError(f"need at least k={k} points, got {n}")

    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    best = None
    for r in range(cfg.restarts):
        rng = np.random.default_rng(streams[r])
        centroids = _seed_plusplus(pts, k, rng)
        labels, centroids, cost = _lloyd(pts, centroids, cfg.max_iter, cfg.tol)
        if best is None or cost < best[0]:
            best = (cost, r, labels, centroids)
    cost, r, labels, centroids = best
    return KmeansResult(
        labeling=Labeling(labels.astype(np.int64), k),
        centroids=centroids,
        cost=cost,
        restart=r,
    )
