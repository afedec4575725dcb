"""Leading eigenpair of a Hermitian operator via shifted power iteration.

The iteration runs on H + s I with s an upper bound on the spectral norm
(max absolute row sum), which makes every shifted eigenvalue nonnegative and
the dominant one correspond to the largest *signed* eigenvalue of H.  That
is the eigenvalue the relaxed clustering objective maximizes; the plain
power method would find the largest-magnitude one instead, and the two can
differ.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["EigenConfig", "EigenResult", "top_eigenpair", "dense_top_eigenpair"]


@dataclass(frozen=True)
class EigenConfig:
    """Stopping rule for the power iteration.

    tol bounds the phase-aligned distance between successive iterates;
    the residual check below tightens it into an eigenpair guarantee.
    """

    tol: float = 1e-8
    max_iter: int = 5000
    seed: int = 0

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass(frozen=True)
class EigenResult:
    """Converged (or best-effort) eigenpair plus solve diagnostics.

    ``converged`` is False when the iteration hit max_iter with the
    residual still above 10 * tol * |value|; ``zero_operator`` marks the
    degenerate all-zero case, where value 0 and the start vector are
    returned.
    """

    value: float
    vector: np.ndarray
    iterations: int
    residual: float
    converged: bool
    zero_operator: bool = False


def _start_vector(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def top_eigenpair(op, cfg: EigenConfig = EigenConfig()) -> EigenResult:
    """Largest-signed eigenpair of a Hermitian operator, matrix-free.

    ``op`` needs ``n``, ``matvec(x)``, and ``norm_bound()``.  Each iteration
    costs one matvec; the residual ||H v - lambda v|| comes for free from
    the shifted product, and the returned vector is the iterate the
    residual was measured on.  The eigenvector is defined only up to a
    global complex phase.  Deterministic for a fixed seed.
    """
    n = op.n
    if n < 1:
        raise ValueError("operator must act on at least one vertex")
    b = _start_vector(n, cfg.seed)
    shift = op.norm_bound()
    if shift == 0.0:
        return EigenResult(0.0, b, 0, 0.0, True, zero_operator=True)

    tiny = np.finfo(np.float64).tiny
    lam = 0.0
    resid = np.inf
    for it in range(1, cfg.max_iter + 1):
        y = op.matvec(b)
        y += shift * b
        lam_shifted = float(np.vdot(b, y).real)
        lam = lam_shifted - shift
        resid = float(np.linalg.norm(y - lam_shifted * b))
        ynorm = float(np.linalg.norm(y))
        if ynorm == 0.0:
            # b is an exact eigenvector of the shifted operator at 0
            return EigenResult(-shift, b, it, 0.0, True)
        b_next = y / ynorm
        # phase-aligned distance between successive unit iterates
        overlap = abs(np.vdot(b, b_next))
        dist = np.sqrt(max(2.0 - 2.0 * overlap, 0.0))
        if dist <= cfg.tol and resid <= 10.0 * cfg.tol * max(abs(lam), tiny):
            return EigenResult(lam, b, it, resid, True)
        b = b_next
    return EigenResult(lam, b, cfg.max_iter, resid, False)


def dense_top_eigenpair(matrix: np.ndarray, select: str = "signed",
                        max_n: int = 2000) -> tuple[float, np.ndarray]:
    """Oracle eigenpair from a full dense Hermitian eigendecomposition.

    select='signed' returns the largest eigenvalue, select='magnitude' the
    one of largest absolute value (ties broken toward the positive one).
    Refuses matrices that are not Hermitian to 1e-10 or larger than max_n.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if m.shape[0] > max_n:
        raise ValueError(f"dense oracle capped at N={max_n}")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if float(np.abs(m - m.conj().T).max(initial=0.0)) > 1e-10 * scale:
        raise ValueError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(m)
    if select == "signed":
        idx = len(vals) - 1
    elif select == "magnitude":
        order = np.lexsort((vals, np.abs(vals)))
        idx = int(order[-1])
    else:
        raise ValueError("select must be 'signed' or 'magnitude'")
    return float(vals[idx]), vecs[:, idx]
