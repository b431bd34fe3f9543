"""Spectral GNN baseline: polynomial filters in a normalized adjacency.

Each layer maps channel vectors z_i to z_j = rho(sum_i h_ij(L) z_i + b_j 1)
where h_ij is a degree-K polynomial in L = (1/n) D^(-1/2) A D^(-1/2) and
D is the diagonal of mean degrees. Polynomials are evaluated on vectors
(Horner), never materializing powers of L.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SGNNError(ValueError):
    pass


def normalized_adjacency(A: np.ndarray, degree_floor: float) -> np.ndarray:
    """L = (1/n) * Dbar^(-1/2) A Dbar^(-1/2) with Dbar = (1/n) diag(A 1).

    Mean degrees below the floor are reported as degenerate input, not
    clamped: the spectral normalization is meaningless on such graphs.
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise SGNNError("adjacency must be square")
    if np.any(A < 0) or not np.allclose(A, A.T):
        raise SGNNError("adjacency must be symmetric non-negative")
    dbar = A.sum(axis=1) / n
    if np.min(dbar) < degree_floor:
        raise SGNNError(
            f"degenerate input: min mean degree {np.min(dbar):.3g} below floor "
            f"{degree_floor}")
    s = 1.0 / np.sqrt(dbar)
    return (A * s[:, None] * s[None, :]) / n


@dataclass(frozen=True)
class SGNNLayer:
    """beta has shape (d_in, d_out, K+1); bias has shape (d_out,)."""

    beta: np.ndarray
    bias: np.ndarray

    @property
    def in_channels(self) -> int:
        return self.beta.shape[0]

    @property
    def out_channels(self) -> int:
        return self.beta.shape[1]

    @property
    def degree(self) -> int:
        return self.beta.shape[2] - 1


@dataclass(frozen=True)
class SGNNModel:
    layers: tuple
    activation: str = "relu"
    degree_floor: float = 1e-6
    model_id: str = "sgnn"

    def __post_init__(self):
        for a, b in zip(self.layers, self.layers[1:]):
            if a.out_channels != b.in_channels:
                raise SGNNError("layer chain mismatch")


def _activation(name: str):
    from .ign import ACTIVATIONS

    if name not in ACTIVATIONS:
        raise SGNNError(f"unknown activation {name!r}")
    return ACTIVATIONS[name]


def sgnn_forward(model: SGNNModel, A: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Forward pass on an n x d_0 signal; returns n x d_T."""
    rho = _activation(model.activation)
    L = normalized_adjacency(A, model.degree_floor)
    n = L.shape[0]
    z = np.asarray(x, dtype=np.float64)
    if z.ndim == 1:
        z = z[:, None]
    if z.shape[0] != n:
        raise SGNNError("signal length does not match the graph")
    for layer in model.layers:
        if z.shape[1] != layer.in_channels:
            raise SGNNError("channel mismatch")
        K = layer.degree
        # Horner on vectors: acc = beta_K * z; acc = L@acc + beta_{k}*z ...
        acc = np.einsum("nd,dek->nek", z, layer.beta)  # stash all monomial mixes
        out = acc[:, :, K]
        for k in range(K - 1, -1, -1):
            out = L @ out + acc[:, :, k]
        z = rho(out + layer.bias[None, :])
    return z


def random_sgnn(widths, degree: int, seed: int, scale: float = 1.0,
                activation: str = "relu") -> SGNNModel:
    """Random coefficients, uniform on [-scale, scale], reproducible."""
    layers = []
    for t, (d_in, d_out) in enumerate(zip(widths, widths[1:])):
        rng = np.random.default_rng(np.random.SeedSequence([seed, t]))
        beta = rng.uniform(-scale, scale, size=(d_in, d_out, degree + 1))
        layers.append(SGNNLayer(beta, np.zeros(d_out)))
    return SGNNModel(tuple(layers), activation, model_id=f"sgnn-s{seed}")


def serialize_sgnn(model: SGNNModel, widths, degree: int, seed: int,
                   scale: float) -> str:
    lines = [
        f"model_id = {model.model_id}",
        "kind = sgnn",
        f"activation = {model.activation}",
        "widths = " + " ".join(str(w) for w in widths),
        f"degree = {degree}",
        f"seed = {seed}",
        f"scale = {scale}",
    ]
    return "\n".join(lines) + "\n"
