"""Edge-probability estimation from a single 0-1 adjacency matrix.

Neighborhood smoothing: nodes are compared through their rows of A^2 (a
degree-2 neighborhood profile that averages out the Bernoulli noise),
each node gets a quantile neighborhood of look-alike nodes, and the edge
probability P_ij is estimated by averaging A over the neighborhood of i.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SmoothingError(ValueError):
    pass


@dataclass(frozen=True)
class SmoothingConfig:
    """c_bandwidth scales the quantile level h = C * sqrt(log n / n)."""

    c_bandwidth: float = 1.0
    symmetrize: bool = True

    def __post_init__(self):
        if not 0.0 < self.c_bandwidth <= 1.0:
            raise SmoothingError("bandwidth constant must lie in (0, 1]")


def _pairwise_dissimilarity(A: np.ndarray) -> np.ndarray:
    """d(i,i') = max over k not in {i,i'} of |(A^2)_ik - (A^2)_i'k| / n."""
    n = A.shape[0]
    B = A @ A
    D = np.empty((n, n))
    for i in range(n):
        diff = np.abs(B[i][None, :] - B)  # (i', k)
        diff[:, i] = -np.inf  # exclude k = i
        np.fill_diagonal(diff, -np.inf)  # exclude k = i'
        D[i] = diff.max(axis=1) / n
    np.fill_diagonal(D, np.inf)  # self never a candidate neighbor
    return D


def neighborhood_smoothing(A: np.ndarray, cfg: SmoothingConfig = SmoothingConfig()) -> np.ndarray:
    """Estimate the edge-probability matrix behind a 0-1 adjacency matrix.

    Neighborhood of i: nodes i' != i with dissimilarity at or below the
    lower empirical h-quantile of row i, h = C*sqrt(log n / n); the
    closest node is always included so no neighborhood is empty. The
    estimate averages rows of A over each neighborhood, optionally
    symmetrizes, and clamps to [0,1].
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise SmoothingError("adjacency must be square")
    if n < 8:
        raise SmoothingError("need n >= 8")
    if not np.array_equal(A, A.T):
        raise SmoothingError("adjacency must be symmetric")
    if not np.all((A == 0) | (A == 1)):
        raise SmoothingError("adjacency must be binary")

    D = _pairwise_dissimilarity(A)
    h = cfg.c_bandwidth * np.sqrt(np.log(n) / n)
    P = np.empty((n, n))
    for i in range(n):
        row = D[i]
        candidates = np.delete(row, i)
        # lower empirical quantile: the floor(h * (n-1)) smallest value,
        # at least the minimum (argmin neighbor always included)
        rank = max(int(np.floor(h * (n - 1))) - 1, 0)
        thresh = np.partition(candidates, rank)[rank]
        members = row <= thresh
        P[i] = A[members].mean(axis=0)
    if cfg.symmetrize:
        P = 0.5 * (P + P.T)
    return np.clip(P, 0.0, 1.0)


def d_2inf(P: np.ndarray, Q: np.ndarray) -> float:
    """Normalized 2,infinity distance: max over rows of n^(-1/2)*||P_i - Q_i||_2.

    Always at least (1/n)*||P - Q||_F.
    """
    P = np.asarray(P, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    if P.shape != Q.shape:
        raise SmoothingError("shape mismatch")
    n = P.shape[0]
    return float(np.max(np.linalg.norm(P - Q, axis=1)) / np.sqrt(n))
