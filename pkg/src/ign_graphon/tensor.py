"""Dense order-k multichannel tensors, partition-induced slices, and the
partition norm.

A KTensor stores an order-k tensor with uniform axis size n plus a
trailing channel axis of size d. Order 0 is a plain d-vector (the output
of an invariant readout), order 1 a node signal, order 2 a matrix.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .partitions import Partition, bell, enumerate_partitions, format_partition

_MAGIC = b"KTN1"


class TensorError(ValueError):
    pass


@dataclass(frozen=True)
class KTensor:
    """Immutable dense tensor of shape (n,)*order + (channels,)."""

    data: np.ndarray
    order: int
    n: int
    channels: int

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        expected = (self.n,) * self.order + (self.channels,)
        if arr.shape != expected:
            raise TensorError(f"shape {arr.shape} != expected {expected}")
        if not np.all(np.isfinite(arr)):
            raise TensorError("non-finite values not admitted")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @staticmethod
    def of(arr, order: int | None = None) -> "KTensor":
        """Wrap an array; by default every axis but the last is a node axis."""
        arr = np.asarray(arr, dtype=np.float64)
        if order is None:
            order = arr.ndim - 1
        if order < 0 or order > arr.ndim:
            raise TensorError(f"invalid order {order} for ndim {arr.ndim}")
        if arr.ndim == order:  # implicit single channel
            arr = arr[..., None]
        n = arr.shape[0] if order > 0 else 0
        return KTensor(arr, order, n, arr.shape[-1])

    def channel(self, c: int) -> np.ndarray:
        return self.data[..., c]


def _block_index_grids(gamma: Partition, n: int) -> tuple[np.ndarray, ...]:
    """Open index grids: one arange per block of `gamma`, broadcastable to
    (n,)*|gamma|, assigned to the source axes they cover.

    Indexing X (order k) with the returned k-tuple reads the slice X_gamma.
    """
    r = len(gamma.blocks)
    grids = []
    for b, block in enumerate(gamma.blocks):
        shape = [1] * r
        shape[b] = n
        grids.append(np.arange(n).reshape(shape))
    per_axis = [None] * gamma.k
    for b, block in enumerate(gamma.blocks):
        for pos in block:
            per_axis[pos - 1] = grids[b]
    return tuple(per_axis)


def _distinct_mask(nblocks: int, n: int) -> np.ndarray:
    """Boolean (n,)*nblocks mask: True where all block representatives differ."""
    if nblocks <= 1:
        return np.ones((n,) * nblocks, dtype=bool)
    mask = np.ones((n,) * nblocks, dtype=bool)
    for a in range(nblocks):
        for b in range(a + 1, nblocks):
            sa, sb = [1] * nblocks, [1] * nblocks
            sa[a] = n
            sb[b] = n
            mask &= np.arange(n).reshape(sa) != np.arange(n).reshape(sb)
    return mask


def tensor_slice(X: KTensor, gamma: Partition) -> KTensor:
    """Sub-tensor obtained by identifying the axes within each block.

    Output order |gamma|, axes in canonical block order; the entry at
    (j_1..j_r) reads X at the tuple where every axis in block c carries
    j_c. For order 2, gamma={{1,2}} is the diagonal and gamma={{1},{2}}
    is X itself.
    """
    if gamma.k != X.order:
        raise TensorError(f"partition of [{gamma.k}] cannot slice order {X.order}")
    idx = _block_index_grids(gamma, X.n)
    out = X.data[idx]
    return KTensor.of(out, order=len(gamma.blocks))


def embed_slice(Yg: KTensor, gamma: Partition, n: int) -> KTensor:
    """Place an order-|gamma| tensor onto the strict pattern of `gamma`
    inside an order-m tensor, zero elsewhere.

    Index tuples where distinct blocks coincide stay zero (strict
    membership), so embedding a vector via {{1,2}} gives Diag(v) and
    embedding a matrix via {{1},{2}} zeroes its diagonal.
    """
    m = gamma.k
    r = len(gamma.blocks)
    if Yg.order != r or Yg.n != n:
        raise TensorError("slice order/axis size does not match the partition")
    out = np.zeros((n,) * m + (Yg.channels,))
    idx = _block_index_grids(gamma, n)
    mask = _distinct_mask(r, n)
    out[idx] = Yg.data * mask[..., None]
    return KTensor.of(out, order=m)


def permute(X: KTensor, sigma) -> KTensor:
    """Relabel nodes: output(i_1..i_k) = X(sigma(i_1)..sigma(i_k)).

    sigma is a 0-based permutation array of [n]; channels untouched.
    """
    sigma = np.asarray(sigma)
    if sorted(sigma.tolist()) != list(range(X.n)):
        raise TensorError("sigma is not a permutation of the node set")
    out = X.data
    for axis in range(X.order):
        out = np.take(out, sigma, axis=axis)
    return KTensor.of(out, order=X.order)


@dataclass(frozen=True)
class PartitionNormValue:
    """Vector of bell(k) slice norms in canonical partition order."""

    components: tuple[float, ...]
    norm_kind: str
    partitions: tuple[Partition, ...] = field(repr=False)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.components)

    def max_component(self) -> float:
        return max(self.components)

    def to_csv(self) -> str:
        header = ",".join(format_partition(p) for p in self.partitions)
        row = ",".join(repr(c) for c in self.components)
        return header + "\n" + row + "\n"


def partition_norm(X: KTensor, kind: str = "l2") -> PartitionNormValue:
    """One normalized slice norm per partition of [k], summed over channels.

    L2 kind: n^(-|gamma|/2) * ||X_gamma||_2 per channel; Linf kind:
    max-abs of the slice per channel. For a 2-tensor the components are
    (||diag||/sqrt(n), ||X||_F/n) in that order.
    """
    if X.order < 1:
        raise TensorError("order-0 tensors use the plain Euclidean norm")
    if kind not in ("l2", "linf"):
        raise TensorError(f"unknown norm kind {kind!r}")
    parts = enumerate_partitions(X.order)
    comps = []
    for gamma in parts:
        s = tensor_slice(X, gamma).data
        flat = s.reshape(-1, X.channels)
        if kind == "l2":
            per_channel = np.linalg.norm(flat, axis=0) * X.n ** (-len(gamma.blocks) / 2)
        else:
            per_channel = np.max(np.abs(flat), axis=0)
        comps.append(float(per_channel.sum()))
    assert len(comps) == bell(X.order)
    return PartitionNormValue(tuple(comps), kind, parts)


def invariant_norm(X: KTensor) -> float:
    """Euclidean norm of an order-0 (invariant) output."""
    if X.order != 0:
        raise TensorError("invariant_norm expects an order-0 tensor")
    return float(np.linalg.norm(X.data))


def save_tensor(X: KTensor, path) -> None:
    """Binary round-trip format: magic, (order, n, channels) as little-endian
    uint32, then float64 data in C order."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<III", X.order, X.n, X.channels))
        fh.write(X.data.astype("<f8").tobytes(order="C"))


def load_tensor(path) -> KTensor:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise TensorError(f"bad magic {magic!r}")
        order, n, channels = struct.unpack("<III", fh.read(12))
        count = (n ** order if order else 1) * channels
        data = np.frombuffer(fh.read(count * 8), dtype="<f8", count=count)
    shape = (n,) * order + (channels,)
    return KTensor(data.reshape(shape).astype(np.float64), order, n, channels)
