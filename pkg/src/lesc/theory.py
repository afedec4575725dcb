"""Closed-form population diagnostics for the two-community model.

The expected Hermitian matrix has a two-block structure: intra-community
off-diagonal entries equal a = w_r p + w_c, cross entries equal
b = w_r q + w_c + i w_i (1 - 2 eta) q, and its informative spectrum reduces
to a 2x2 Hermitian core.  Everything here is an explicit function of
(n1, n2, p, q, eta): the eigengap lower bound, the separation between the
two values of the top population eigenvector, the concentration constant,
and the resulting misclustering error bound.  Probabilities are clamped
internally, so the diagnostics are finite wherever they are defined.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import atanh, hypot, inf, log, log1p, sqrt

import numpy as np

from .mle import MleWeights, clamp_params, mle_weights

__all__ = [
    "PopulationSummary",
    "population_matrix",
    "eigengap_delta",
    "centroid_distance",
    "l_eta",
    "concentration_constant",
    "error_bound",
    "population_summary",
]


@dataclass(frozen=True)
class PopulationSummary:
    """Population quantities for one parameter point.

    lambda1/lambda2 are the two block-derived eigenvalues of the expected
    matrix (the rest of its spectrum sits at the flat value -(w_r p + w_c));
    delta lower-bounds the top eigengap; centroid_distance is the
    separation d of the two values of the top eigenvector.  degenerate_core
    marks the case where those two values coincide (d may be 0; the error
    bound then diverges).  The probability exponent of the underlying
    high-probability statement is an unspecified absolute constant and is
    deliberately not represented.
    """

    n1: int
    n2: int
    p: float
    q: float
    eta: float
    weights: MleWeights
    lambda1: float
    lambda2: float
    delta: float
    centroid_distance: float
    degenerate_core: bool
    epsilon: float
    concentration: float
    bound: float


def _core(n1: int, n2: int, p: float, q: float, eta: float):
    """Clamped weights plus the block entries (a, b) of the expected matrix."""
    n = n1 + n2
    p, q, eta = clamp_params(p, q, eta, n)
    w = mle_weights(p, q, eta)
    a = w.w_r * p + w.w_c
    b = w.w_r * q + w.w_c + 1j * w.w_i * (1.0 - 2.0 * eta) * q
    return p, q, eta, w, a, b


def population_matrix(n1: int, n2: int, p: float, q: float, eta: float) -> np.ndarray:
    """Dense expected Hermitian matrix (entrywise expectation, zero diagonal)."""
    n = n1 + n2
    if n > 2000:
        raise ValueError("dense population matrix capped at N=2000")
    if n1 < 1 or n2 < 1:
        raise ValueError("community sizes must be positive")
    _, _, _, _, a, b = _core(n1, n2, p, q, eta)
    m = np.empty((n, n), dtype=np.complex128)
    m[:n1, :n1] = a
    m[n1:, n1:] = a
    m[:n1, n1:] = b
    m[n1:, :n1] = np.conj(b)
    np.fill_diagonal(m, 0.0)
    return m


def _delta(n1: int, n2: int, a: float, b: complex) -> float:
    # equal to 1/2 sqrt(N^2 a^2 - 4 n1 n2 (a^2 - |b|^2)), grouped to
    # avoid cancellation
    return 0.5 * sqrt((n1 - n2) ** 2 * a * a + 4.0 * n1 * n2 * abs(b) ** 2)


def eigengap_delta(n1: int, n2: int, p: float, q: float, eta: float) -> float:
    """Lower bound on the gap between the top two population eigenvalues.

    The true separation of the largest-magnitude eigenvalue from the rest
    of the spectrum is min(2 delta, |N a| / 2 + delta), which always lies
    in [delta, 2 delta].
    """
    _, _, _, _, a, b = _core(n1, n2, p, q, eta)
    return _delta(n1, n2, a, b)


def _top_core_eigenpair(n1: int, n2: int, a: float, b: complex):
    """Eigenpair of the size-normalized 2x2 core feeding the top eigenvector.

    Of the two block eigenvalues (N a / 2 +- delta) - a of the expected
    matrix, picks the one of larger magnitude (ties toward the '+' branch)
    and returns it with its unit core eigenvector.
    """
    n = n1 + n2
    delta = _delta(n1, n2, a, b)
    lam_plus = 0.5 * n * a + delta
    lam_minus = 0.5 * n * a - delta
    if abs(lam_plus - a) >= abs(lam_minus - a):
        lam = lam_plus
    else:
        lam = lam_minus
    big_b = sqrt(n1 * n2) * b
    if big_b == 0:
        v1, v2 = (n1 * a, n2 * a)
        if v1 == v2:
            # core is a multiple of the identity: no preferred direction;
            # use the symmetric vector so the two values coincide
            x = np.array([1.0, 1.0], dtype=np.complex128) / sqrt(2.0)
            return v1 - a, x
        # diagonal core: basis eigenvectors
        x = np.array([1.0, 0.0]) if abs(v1 - a) >= abs(v2 - a) else np.array([0.0, 1.0])
        lam = v1 if x[0] else v2
        return lam - a, x.astype(np.complex128)
    x = np.array([big_b, lam - n1 * a], dtype=np.complex128)
    x /= np.linalg.norm(x)
    return lam - a, x


def centroid_distance(n1: int, n2: int, p: float, q: float, eta: float) -> float:
    """Distance between the two values taken by the top population eigenvector.

    Computed analytically from the 2x2 core.  In the balanced homogeneous
    case this reduces to d^2 = 4 sin^2(theta/2) / N with theta the phase of
    the cross entry; note theta tends to atan(2), not 0, as eta approaches
    0.5 with p = q, so d stays of order 1/sqrt(N) until the core collapses
    entirely at eta = 0.5 (where the degenerate convention gives 0; see
    :func:`population_summary` for the flag).
    """
    _, _, _, _, a, b = _core(n1, n2, p, q, eta)
    _, x = _top_core_eigenpair(n1, n2, a, b)
    return float(abs(x[0] / sqrt(n1) - x[1] / sqrt(n2)))


def l_eta(eta: float) -> float:
    """Signal-strength factor of the balanced homogeneous error bound.

    Continuous and monotonically decreasing on (0, 0.5], with value 0 at
    eta = 0.5 exactly.  Evaluated through log1p/atanh so the ratio of
    vanishing logs stays accurate arbitrarily close to 0.5.
    """
    if not 0.0 < eta <= 0.5:
        raise ValueError("eta must lie in (0, 0.5]")
    if eta == 0.5:
        return 0.0
    t = 1.0 - 2.0 * eta
    # ratio of log(1/(4 eta (1-eta))) to log((1-eta)/eta)
    wr = -log1p(-t * t) / (2.0 * atanh(t))
    m = hypot(wr, t)
    return m * m + wr * m


def concentration_constant(n1: int, n2: int, p: float, q: float, eta: float,
                           epsilon: float = 1.0) -> float:
    """Constant scaling the high-probability perturbation norm bound."""
    n = n1 + n2
    p, q, eta = clamp_params(p, q, eta, n)
    w = mle_weights(p, q, eta)
    p_max = max(p, q)
    return (2.0 + epsilon) * sqrt(w.w_r ** 2 + w.w_i ** 2) * (
        log(n) / (n * p_max) + 1.0
    )


def error_bound(n1: int, n2: int, p: float, q: float, eta: float,
                epsilon: float = 1.0) -> float:
    """Misclustering error-rate bound 64 (2+eps) C^2 p_max log N / (d^2 delta^2).

    A bound, not an estimate: it is often far above 1 at small scales and
    diverges when the centroid distance vanishes (eta -> 0.5 with p = q).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = n1 + n2
    pc, qc, ec = clamp_params(p, q, eta, n)
    p_max = max(pc, qc)
    c = concentration_constant(n1, n2, p, q, eta, epsilon)
    d = centroid_distance(n1, n2, p, q, eta)
    delta = eigengap_delta(n1, n2, p, q, eta)
    if d == 0.0 or delta == 0.0:
        return inf
    return 64.0 * (2.0 + epsilon) * c * c * p_max * log(n) / (d * d * delta * delta)


def population_summary(n1: int, n2: int, p: float, q: float, eta: float,
                       epsilon: float = 1.0) -> PopulationSummary:
    """All population diagnostics for one parameter point."""
    n = n1 + n2
    pc, qc, ec, w, a, b = _core(n1, n2, p, q, eta)
    delta = _delta(n1, n2, a, b)
    lam1 = 0.5 * n * a + delta - a
    lam2 = 0.5 * n * a - delta - a
    _, x = _top_core_eigenpair(n1, n2, a, b)
    degenerate = bool(abs(x[0] - x[1]) <= 1e-12 * max(abs(x[0]), abs(x[1]), 1e-300))
    d = float(abs(x[0] / sqrt(n1) - x[1] / sqrt(n2)))
    c = concentration_constant(n1, n2, p, q, eta, epsilon)
    if d == 0.0 or delta == 0.0:
        bound = inf
    else:
        bound = 64.0 * (2.0 + epsilon) * c * c * max(pc, qc) * log(n) / (
            d * d * delta * delta
        )
    return PopulationSummary(
        n1=n1, n2=n2, p=pc, q=qc, eta=ec, weights=w,
        lambda1=lam1, lambda2=lam2, delta=delta,
        centroid_distance=d, degenerate_core=degenerate,
        epsilon=epsilon, concentration=c, bound=bound,
    )
