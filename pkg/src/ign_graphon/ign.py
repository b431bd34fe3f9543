"""Invariant graph networks: layer specs, forward pass, random init, the
fine-grid continuous surrogate, and the thresholded counterexample model.

A model alternates linear permutation-equivariant layers with a
pointwise normalized-Lipschitz activation and ends in a linear invariant
readout (invariant mode) or a final 2 -> 1 equivariant layer
(equivariant mode). The graph input is the adjacency/weight matrix and
the diagonal-embedded node signal concatenated along channels.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphon import GraphonModel, fixed_latents
from .le_basis import layer_combination
from .partitions import Partition, enumerate_partitions
from .tensor import KTensor, _block_index_grids, _distinct_mask


class ModelError(ValueError):
    pass


def relu(x):
    return np.maximum(x, 0.0)


ACTIVATIONS = {"relu": relu, "tanh": np.tanh, "identity": lambda x: x}


@dataclass(frozen=True)
class LayerSpec:
    """One linear equivariant layer with channel mixing and pattern biases.

    coeffs maps each partition of [l+m] to an (in_channels, out_channels)
    matrix; bias maps each partition of [m] to an out_channels vector,
    realized as strict pattern-indicator tensors.
    """

    in_order: int
    out_order: int
    in_channels: int
    out_channels: int
    coeffs: dict = field(default_factory=dict)
    bias: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = set(enumerate_partitions(self.in_order + self.out_order))
        if set(self.coeffs) - expected:
            raise ModelError("coefficient keyed by a foreign partition")
        for gamma, mat in self.coeffs.items():
            if np.asarray(mat).shape != (self.in_channels, self.out_channels):
                raise ModelError(f"coefficient for {gamma} has wrong shape")
        if self.out_order > 0:
            bias_keys = set(enumerate_partitions(self.out_order))
            if set(self.bias) - bias_keys:
                raise ModelError("bias keyed by a foreign output pattern")
        for beta, vec in self.bias.items():
            if np.asarray(vec).shape != (self.out_channels,):
                raise ModelError(f"bias for {beta} has wrong shape")

    def max_coeff(self) -> float:
        vals = [np.max(np.abs(m)) for m in self.coeffs.values()] or [0.0]
        return float(max(vals))


def _pattern_indicator(beta: Partition, n: int) -> np.ndarray:
    """Strict 0/1 indicator tensor of an output pattern."""
    m = beta.k
    out = np.zeros((n,) * m)
    idx = _block_index_grids(beta, n)
    out[idx] = _distinct_mask(len(beta.blocks), n).astype(np.float64)
    return out


def _layer_apply_raw(spec: LayerSpec, arr: np.ndarray) -> np.ndarray:
    n = arr.shape[0]
    coeffs = spec.coeffs or {
        enumerate_partitions(spec.in_order + spec.out_order)[0]:
        np.zeros((spec.in_channels, spec.out_channels))
    }
    out = layer_combination(coeffs, spec.in_order, spec.out_order, arr)
    for beta, vec in spec.bias.items():
        if np.any(np.asarray(vec)):
            ind = _pattern_indicator(beta, n)
            out += ind[..., None] * np.asarray(vec, dtype=np.float64)
    return out


def layer_apply(spec: LayerSpec, X: KTensor) -> KTensor:
    """Linear layer: sum over partitions of coefficient-mixed basis ops,
    plus pattern-constant bias tensors."""
    if X.order != spec.in_order or X.channels != spec.in_channels:
        raise ModelError(
            f"layer expects order {spec.in_order} x {spec.in_channels} channels, "
            f"got {X.order} x {X.channels}")
    return KTensor.of(_layer_apply_raw(spec, X.data), order=spec.out_order)


@dataclass(frozen=True)
class IGNModel:
    """Equivariant layer stack with a linear readout.

    output_mode 'invariant' reads out through bell(k_T) invariant
    operators into a d-vector; 'equivariant' requires the final layer to
    emit an order-1 tensor. The activation is applied after every hidden
    layer (not after the readout).
    """

    layers: tuple
    activation: str = "relu"
    final_invariant: dict | None = None  # Partition of [k_T] -> (d_T, d_out)
    output_mode: str = "invariant"
    model_id: str = "ign"

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ModelError(f"unknown activation {self.activation!r}")
        if self.output_mode not in ("invariant", "equivariant"):
            raise ModelError(f"unknown output mode {self.output_mode!r}")
        for a, b in zip(self.layers, self.layers[1:]):
            if (a.out_order, a.out_channels) != (b.in_order, b.in_channels):
                raise ModelError("layer chain mismatch")
        last = self.layers[-1]
        if self.output_mode == "invariant":
            if self.final_invariant is None:
                raise ModelError("invariant mode needs a readout coefficient map")
            for gamma, mat in self.final_invariant.items():
                if gamma.k != last.out_order:
                    raise ModelError("readout keyed by a foreign partition")
                if np.asarray(mat).shape[0] != last.out_channels:
                    raise ModelError("readout channel mismatch")
        elif last.out_order != 1:
            raise ModelError("equivariant mode requires a final order-1 layer")


def graph_input(weights: np.ndarray, signal=None) -> KTensor:
    """Concatenate the (weight) matrix and the diagonal-embedded signal
    along channels."""
    W = np.asarray(weights, dtype=np.float64)
    n = W.shape[0]
    if signal is None:
        signal = np.zeros(n)
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    chans = [W[..., None]] + [np.diag(x[:, c])[..., None] for c in range(x.shape[1])]
    return KTensor.of(np.concatenate(chans, axis=-1), order=2)


def forward(model: IGNModel, X: KTensor) -> KTensor:
    """Forward pass; returns an order-0 d-vector in invariant mode, an
    order-1 tensor in equivariant mode."""
    act = ACTIVATIONS[model.activation]
    first = model.layers[0]
    if X.order != first.in_order or X.channels != first.in_channels:
        raise ModelError(
            f"model expects order {first.in_order} x {first.in_channels} channels, "
            f"got {X.order} x {X.channels}")
    arr = X.data
    for spec in model.layers:
        arr = act(_layer_apply_raw(spec, arr))
    last = model.layers[-1]
    if model.output_mode == "equivariant":
        return KTensor.of(arr, order=last.out_order)
    out = layer_combination(model.final_invariant, last.out_order, 0, arr)
    return KTensor(out, 0, 0, out.shape[-1])


def random_init(arch, a2_bound: float = 1.0, seed: int = 0, *,
                activation: str = "relu", out_channels: int = 1,
                model_id: str | None = None) -> IGNModel:
    """Random model under the bounded-coefficient assumption.

    arch is a sequence of (order, channels) from the input tensor through
    every hidden layer. Coefficients are i.i.d. uniform on
    [-a2_bound, a2_bound]; each matrix gets its own counter-based stream
    keyed by (seed, layer index, partition index), so init is
    order-independent and bit-reproducible. Biases are zero.
    """
    if a2_bound <= 0:
        raise ModelError("coefficient bound must be positive")
    arch = list(arch)
    layers = []
    for t, ((k_in, d_in), (k_out, d_out)) in enumerate(zip(arch, arch[1:])):
        parts = enumerate_partitions(k_in + k_out)
        coeffs = {}
        for gi, gamma in enumerate(parts):
            rng = np.random.default_rng(np.random.SeedSequence([seed, t, gi]))
            coeffs[gamma] = rng.uniform(-a2_bound, a2_bound, size=(d_in, d_out))
        layers.append(LayerSpec(k_in, k_out, d_in, d_out, coeffs, {}))
    k_t, d_t = arch[-1]
    readout = {}
    for gi, gamma in enumerate(enumerate_partitions(k_t)):
        rng = np.random.default_rng(np.random.SeedSequence([seed, len(arch) - 1, gi]))
        readout[gamma] = rng.uniform(-a2_bound, a2_bound, size=(d_t, out_channels))
    mid = model_id or f"ign-s{seed}"
    return IGNModel(tuple(layers), activation, readout, "invariant", mid)


def continuous_forward(model: IGNModel, W: GraphonModel, X, n_ref: int = 2048) -> KTensor:
    """Fine-grid surrogate of the continuous model output.

    Evaluates the model on the deterministic grid sample at n_ref; the
    discretization bias decays like the edge-weight convergence rate, so
    n_ref well above the largest experiment size serves as ground truth.
    """
    if n_ref < 256:
        raise ModelError("n_ref must be at least 256")
    u = fixed_latents(n_ref)
    weights = W.weight_matrix(u)
    signal = None if X is None else np.asarray(X(u), dtype=np.float64)
    return forward(model, graph_input(weights, signal))


def counterexample_ign(c_max: float, threshold_margin: float = 0.5) -> IGNModel:
    """Model whose continuous output is identically 0 on graphons bounded
    by c_max while its output on 0-1 samples converges to a positive
    limit.

    Layer 1 subtracts the threshold t = c_max + margin*(1 - c_max) from
    the adjacency channel; ReLU kills every entry of a weight matrix
    bounded by c_max but keeps 1 - t on sampled edges; the readout takes
    the off-diagonal mean, which tends to (1 - t) * mean edge
    probability. The gap never closes as n grows.
    """
    if not 0.0 < c_max < 1.0:
        raise ModelError("c_max must lie in (0, 1)")
    if not 0.0 < threshold_margin < 1.0:
        raise ModelError("threshold margin must lie in (0, 1)")
    t = c_max + threshold_margin * (1.0 - c_max)
    identity_pair = {
        Partition.of([[1, 3], [2, 4]]): np.array([[1.0], [0.0]]),
        Partition.of([[1, 2, 3, 4]]): np.array([[1.0], [0.0]]),
    }
    bias = {beta: np.array([-t]) for beta in enumerate_partitions(2)}
    layer = LayerSpec(2, 2, 2, 1, identity_pair, bias)
    readout = {Partition.of([[1], [2]]): np.array([[1.0]])}
    return IGNModel((layer,), "relu", readout, "invariant",
                    f"counterexample-c{c_max}")


def counterexample_limit(c_max: float, mean_edge_probability: float,
                         threshold_margin: float = 0.5) -> float:
    """Analytic limit of the counterexample output on 0-1 samples."""
    t = c_max + threshold_margin * (1.0 - c_max)
    return (1.0 - t) * mean_edge_probability


def serialize_model(model: IGNModel, arch, seed: int, a2_bound: float) -> str:
    """Key-value record sufficient to rebuild a random-init model."""
    lines = [
        f"model_id = {model.model_id}",
        f"kind = ign",
        f"activation = {model.activation}",
        f"output_mode = {model.output_mode}",
        "arch = " + " ".join(f"{k}x{d}" for k, d in arch),
        f"seed = {seed}",
        f"a2_bound = {a2_bound}",
    ]
    return "\n".join(lines) + "\n"
