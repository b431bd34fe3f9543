"""Linear permutation-equivariant basis operators between tensor orders.

One basis operator T_gamma exists per partition gamma of [l+m]: its 0/1
tensor form places weight n^(-|S1|) on every concatenated index tuple
(a, b) that strictly matches gamma's equivalence pattern (equal within
blocks, distinct across blocks), where S1 is the set of input-only
blocks (averaged out).

Three execution routes are provided and cross-checked in tests:
  * apply_basis — the production path. Strict-pattern membership is
    expanded by inclusion-exclusion over merges of gamma's blocks into
    "weak" sum operators (no across-block distinctness), each of which
    is a cheap slice / sum-over-axes / broadcast-embed pipeline.
  * build_basis_matrix — a brute-force dense matrix oracle built
    directly from the membership definition, for small n only.
  * closed_form_2ign — the literal closed forms of the order <= 2
    operator catalog (weak-pattern convention; see weak_from_strict).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .partitions import (
    IODecomposition,
    Partition,
    PartitionError,
    is_member,
    merge_patterns,
    parse_partition,
    split_io,
)
from .tensor import KTensor, TensorError, _block_index_grids

ORACLE_SIZE_CAP = 10 ** 7


@dataclass(frozen=True)
class LEBasisOp:
    """One strict-pattern basis element of the equivariant operator space."""

    partition: Partition
    l: int
    m: int

    @property
    def decomposition(self) -> IODecomposition:
        return split_io(self.partition, self.l, self.m)

    @property
    def normalization_exponent(self) -> int:
        """Power of 1/n applied: the number of input-only (reduction) blocks."""
        return len(self.decomposition.s1)


def basis_ops(l: int, m: int) -> tuple[LEBasisOp, ...]:
    """All bell(l+m) basis operators from order-l to order-m tensors."""
    from .partitions import enumerate_partitions

    return tuple(LEBasisOp(g, l, m) for g in enumerate_partitions(l + m))


@dataclass(frozen=True)
class _WeakLayout:
    """Precomputed plumbing for one weak-sum operator.

    pi1: input-restriction partition of [l] (slice pattern).
    sum_axes: slice axes to sum over (input-only blocks).
    core_transpose: permutation putting the surviving mixed axes into
      ascending output-block position order.
    out_partition: output pattern of [m] (None when m = 0).
    core_positions: for each (transposed) core axis, the index of the
      output-partition block it fills; remaining blocks replicate.
    """

    pi1: Partition
    sum_axes: tuple[int, ...]
    core_transpose: tuple[int, ...]
    out_partition: Partition | None
    core_positions: tuple[int, ...]


@lru_cache(maxsize=None)
def _weak_layout(beta: Partition, l: int, m: int) -> _WeakLayout:
    dec = split_io(beta, l, m)
    if l < 1:
        raise PartitionError("operators require at least one input axis")
    # Slice pattern over the input axes; blocks inherit canonical order
    # (ascending minimum), which for mixed blocks equals their order in s2.
    pi1_blocks = []
    for b in dec.s1 + dec.s2:
        restricted = tuple(x for x in b if x <= l)
        pi1_blocks.append((restricted, b in dec.s1))
    pi1_blocks.sort(key=lambda t: t[0][0])
    pi1 = Partition.of([b for b, _ in pi1_blocks])
    sum_axes = tuple(i for i, (_, is_s1) in enumerate(pi1_blocks) if is_s1)
    kept_sources = [
        next(src for src in dec.s2 if tuple(x for x in src if x <= l) == b)
        for (b, is_s1) in pi1_blocks
        if not is_s1
    ]
    if m == 0:
        return _WeakLayout(pi1, sum_axes, tuple(range(len(kept_sources))), None, ())
    out_blocks = [tuple(x - l for x in b if x > l) for b in dec.s2] + [
        tuple(x - l for x in b) for b in dec.s3
    ]
    out_partition = Partition.of(out_blocks)
    positions = [
        out_partition.blocks.index(tuple(x - l for x in src if x > l))
        for src in kept_sources
    ]
    order = tuple(np.argsort(positions).tolist()) if positions else ()
    core_positions = tuple(positions[i] for i in order)
    return _WeakLayout(pi1, sum_axes, order, out_partition, core_positions)


def _weak_core(layout: _WeakLayout, arr: np.ndarray, n: int) -> np.ndarray:
    """Slice, reduce and reorder: everything before channel mixing/embedding.

    arr has shape (n,)*l + (d,); the result has one axis per retained
    mixed block (ascending output position) plus the channel axis. The
    reduction is an UNnormalized sum; normalizers live in the strict
    coefficients.
    """
    sliced = _reduced_core(layout, arr, n)
    perm = layout.core_transpose
    if perm and perm != tuple(range(len(perm))):
        sliced = np.transpose(sliced, perm + (len(perm),))
    return sliced


def _reduced_core(layout: _WeakLayout, arr: np.ndarray, n: int) -> np.ndarray:
    """Slice on the input pattern and sum out the input-only axes."""
    l = layout.pi1.k
    if len(layout.pi1.blocks) == l:  # all-singleton pattern: slice is arr itself
        sliced = arr
    else:
        sliced = arr[_block_index_grids(layout.pi1, n)]
    if layout.sum_axes:
        sliced = sliced.sum(axis=layout.sum_axes)
    return sliced


def _embed_add(out: np.ndarray, layout_key, core: np.ndarray, n: int) -> None:
    """Add a weak core into the output on its weak pattern (broadcast over
    replication blocks). Index tuples are distinct, so fancy += is exact."""
    out_partition, core_positions = layout_key
    if out_partition is None:
        out += core
        return
    r = len(out_partition.blocks)
    shape = [1] * r
    for pos in core_positions:
        shape[pos] = n
    expanded = core.reshape(tuple(shape) + (core.shape[-1],))
    if r == out_partition.k:  # all-singleton pattern: dense broadcast add
        out += expanded
        return
    idx = _block_index_grids(out_partition, n)
    out[idx] += expanded


def strict_coeffs_to_weak(coeffs: dict, l: int, m: int, n: int) -> dict:
    """Convert strict-operator channel matrices to weak-sum channel matrices.

    Strict distinctness is expanded by inclusion-exclusion: the strict
    operator for gamma equals n^(-|S1(gamma)|) times the Mobius-signed
    sum of unnormalized weak-sum operators over all merges of gamma's
    blocks.
    """
    weak: dict[Partition, np.ndarray] = {}
    for gamma, mat in coeffs.items():
        mat = np.asarray(mat, dtype=np.float64)
        scale = float(n) ** (-len(split_io(gamma, l, m).s1))
        for beta, mu in merge_patterns(gamma):
            term = (mu * scale) * mat
            if beta in weak:
                weak[beta] = weak[beta] + term
            else:
                weak[beta] = term
    return weak


def layer_combination(coeffs: dict, l: int, m: int, arr: np.ndarray) -> np.ndarray:
    """Evaluate sum_gamma T_gamma with channel mixing in one fused pass.

    coeffs maps Partition of [l+m] -> (d_in, d_out) matrix; arr has shape
    (n,)*l + (d_in,). Channel mixing happens on the small pre-embedding
    cores, and cores sharing an embedding pattern are accumulated before
    the broadcast write, so each output pattern is touched once.
    """
    n = arr.shape[0]
    d_out = next(np.asarray(v).shape[1] for v in coeffs.values())
    weak = strict_coeffs_to_weak(coeffs, l, m, n)
    core_cache: dict = {}
    groups: dict = {}
    for beta, mat in weak.items():
        if not np.any(mat):
            continue
        layout = _weak_layout(beta, l, m)
        cache_key = (layout.pi1, layout.sum_axes)
        if cache_key not in core_cache:
            core_cache[cache_key] = _reduced_core(layout, arr, n)
        core = core_cache[cache_key]
        perm = layout.core_transpose
        if perm and perm != tuple(range(len(perm))):
            core = np.transpose(core, perm + (len(perm),))
        core = core @ mat
        key = (layout.out_partition, layout.core_positions)
        if key in groups:
            groups[key] = groups[key] + core
        else:
            groups[key] = core
    out = np.zeros(((n,) * m) + (d_out,))
    for key, core in groups.items():
        _embed_add(out, key, core, n)
    return out


def apply_basis(op: LEBasisOp, X: KTensor) -> KTensor:
    """Apply one strict basis operator to a single-channel tensor.

    Realizes the four-step pipeline — select the slice on the input
    restriction, average over input-only blocks with normalizer
    n^(-|S1|), align mixed blocks onto their output axes, replicate over
    output-only blocks — with entries off the strict pattern zeroed.
    """
    if X.order != op.l:
        raise TensorError(f"operator expects order {op.l}, got {X.order}")
    if X.channels != 1:
        raise TensorError("apply_basis acts on single-channel tensors")
    out = layer_combination({op.partition: np.ones((1, 1))}, op.l, op.m, X.data)
    return KTensor.of(out, order=op.m)


def build_basis_matrix(gamma: Partition, l: int, m: int, n: int) -> np.ndarray:
    """Dense n^m x n^l oracle built entry-by-entry from the definition.

    Entry (row = output multi-index b, col = input multi-index a) equals
    n^(-|S1|) when the concatenated tuple (a, b) strictly matches gamma,
    else 0. Row-major flattening matches the tensor module.
    """
    if n ** (l + m) > ORACLE_SIZE_CAP:
        raise TensorError(f"oracle size n^(l+m) = {n ** (l + m)} exceeds cap")
    weight = float(n) ** (-len(split_io(gamma, l, m).s1))
    mat = np.zeros((n ** m, n ** l))
    for col, a in enumerate(product(range(1, n + 1), repeat=l)):
        for row, b in enumerate(product(range(1, n + 1), repeat=m)):
            if is_member(a + b, gamma):
                mat[row, col] = weight
    return mat


def weak_from_strict(gamma: Partition, l: int, m: int) -> dict:
    """Decompose the weak-pattern operator for gamma over strict operators.

    Returns {beta: e} with weak_gamma = sum_beta n^e * strict_beta, beta
    ranging over gamma and all merges of its blocks. The exponent
    e = |S1(beta)| - |S1(gamma)| <= 0 reconciles the two normalizers
    (merging can only remove input-only blocks); it is 0 exactly when no
    input-only blocks were absorbed.
    """
    if l + m > 6:
        raise PartitionError("weak_from_strict supports l+m <= 6")
    base = len(split_io(gamma, l, m).s1)
    return {
        beta: len(split_io(beta, l, m).s1) - base
        for beta, _ in merge_patterns(gamma)
    }


def weak_apply(gamma: Partition, l: int, m: int, X: KTensor) -> KTensor:
    """Apply the weak-pattern operator (closed-form table convention)."""
    n = X.n
    coeffs: dict[Partition, np.ndarray] = {}
    for beta, e in weak_from_strict(gamma, l, m).items():
        coeffs[beta] = np.ones((1, 1)) * float(n) ** e
    out = layer_combination(coeffs, l, m, X.data)
    return KTensor.of(out, order=m)


# --- Closed-form catalog for orders <= 2 ---------------------------------
#
# Each row: (partition notation, description, formula on a single-channel
# array). The formulas are the weak-pattern operators: they act on full
# tensors (the identity row copies the diagonal too), and each equals the
# weak_from_strict combination of strict operators for its partition.

def _t1(fn):
    return fn


_ONES = None

TABLE_2TO2 = (
    ("{{1,3},{2,4}}", "identity", lambda A, n: A.copy()),
    ("{{1,4},{2,3}}", "transpose", lambda A, n: A.T.copy()),
    ("{{1,2,3,4}}", "diagonal kept in place", lambda A, n: np.diag(np.diag(A))),
    ("{{1,3},{2},{4}}", "row means replicated across columns",
     lambda A, n: np.outer(A @ np.ones(n), np.ones(n)) / n),
    ("{{1,4},{2},{3}}", "row means replicated across rows",
     lambda A, n: np.outer(np.ones(n), A @ np.ones(n)) / n),
    ("{{1,3,4},{2}}", "row means placed on the diagonal",
     lambda A, n: np.diag(A @ np.ones(n)) / n),
    ("{{1},{2,3},{4}}", "column means replicated across columns",
     lambda A, n: np.outer(A.T @ np.ones(n), np.ones(n)) / n),
    ("{{1},{2,4},{3}}", "column means replicated across rows",
     lambda A, n: np.outer(np.ones(n), A.T @ np.ones(n)) / n),
    ("{{1},{2,3,4}}", "column means placed on the diagonal",
     lambda A, n: np.diag(A.T @ np.ones(n)) / n),
    ("{{1},{2},{3},{4}}", "mean of all entries everywhere",
     lambda A, n: np.full((n, n), A.sum() / n ** 2)),
    ("{{1},{2},{3,4}}", "mean of all entries on the diagonal",
     lambda A, n: np.eye(n) * (A.sum() / n ** 2)),
    ("{{1,2},{3},{4}}", "mean of the diagonal everywhere",
     lambda A, n: np.full((n, n), np.trace(A) / n)),
    ("{{1,2},{3,4}}", "mean of the diagonal on the diagonal",
     lambda A, n: np.eye(n) * (np.trace(A) / n)),
    ("{{1,2,3},{4}}", "diagonal replicated across columns",
     lambda A, n: np.outer(np.diag(A), np.ones(n))),
    ("{{1,2,4},{3}}", "diagonal replicated across rows",
     lambda A, n: np.outer(np.ones(n), np.diag(A))),
)

TABLE_1TO2 = (
    ("{{1,2,3}}", "vector placed on the diagonal", lambda v, n: np.diag(v)),
    ("{{1,2},{3}}", "vector replicated across columns",
     lambda v, n: np.outer(v, np.ones(n))),
    ("{{1,3},{2}}", "vector replicated across rows",
     lambda v, n: np.outer(np.ones(n), v)),
    ("{{1},{2,3}}", "vector mean on the diagonal",
     lambda v, n: np.eye(n) * (v.sum() / n)),
    ("{{1},{2},{3}}", "vector mean everywhere",
     lambda v, n: np.full((n, n), v.sum() / n)),
)

TABLE_2TO1 = (
    ("{{1,2,3}}", "extract the diagonal", lambda A, n: np.diag(A).copy()),
    ("{{1,3},{2}}", "row means", lambda A, n: (A @ np.ones(n)) / n),
    ("{{1},{2,3}}", "column means", lambda A, n: (A.T @ np.ones(n)) / n),
    ("{{1},{2},{3}}", "mean of all entries replicated",
     lambda A, n: np.full(n, A.sum() / n ** 2)),
    ("{{1,2},{3}}", "mean of the diagonal replicated",
     lambda A, n: np.full(n, np.trace(A) / n)),
)

_TABLES = {1: (TABLE_2TO2, 2, 2), 2: (TABLE_1TO2, 1, 2), 3: (TABLE_2TO1, 2, 1)}


def table_orders(table_id: int) -> tuple[int, int]:
    _, l, m = _TABLES[table_id]
    return l, m


def table_rows(table_id: int):
    """(partition, description) pairs of a closed-form catalog table."""
    rows, _, _ = _TABLES[table_id]
    return tuple((parse_partition(p), desc) for p, desc, _ in rows)


def closed_form_2ign(table_id: int, row: int, X: KTensor) -> KTensor:
    """Evaluate a catalog row's closed-form formula literally (1-based row)."""
    if table_id not in _TABLES:
        raise ValueError(f"unknown table {table_id}")
    rows, l, m = _TABLES[table_id]
    if not 1 <= row <= len(rows):
        raise ValueError(f"table {table_id} has rows 1..{len(rows)}")
    if X.order != l or X.channels != 1:
        raise TensorError(f"table {table_id} expects single-channel order {l}")
    arr = X.data[..., 0]
    _, _, fn = rows[row - 1]
    return KTensor.of(fn(arr, X.n), order=m)
