"""Walk through the equivariant operator catalog.

Every linear map from order-l to order-m tensors that commutes with
simultaneous node relabeling is a combination of bell(l+m) elementary
operators, one per partition of the l+m axis labels. This script lists
the catalog for 2 -> 2 maps, applies a few operators to a small matrix,
and cross-checks one of them against the dense matrix oracle.
"""
import numpy as np

from ign_graphon import (KTensor, apply_basis, basis_ops,
                         build_basis_matrix, format_partition)

ops = basis_ops(2, 2)
print(f"{len(ops)} elementary operators map matrices to matrices:")
for op in ops:
    print(f"  {format_partition(op.partition):24s}"
          f" averaged axes: {op.normalization_exponent}")

rng = np.random.default_rng(0)
n = 4
X = KTensor.of(rng.normal(size=(n, n)), order=2)

print("\nApplying the first three operators to a random 4x4 matrix:")
for op in ops[:3]:
    out = apply_basis(op, X)
    print(f"  {format_partition(op.partition):24s}"
          f" output Frobenius norm = {np.linalg.norm(out.data):.4f}")

op = ops[5]
M = build_basis_matrix(op.partition, 2, 2, n)
got = apply_basis(op, X).data.reshape(-1)
want = M @ X.data.reshape(-1)
print(f"\nFour-step executor vs dense oracle for"
      f" {format_partition(op.partition)}:"
      f" max |diff| = {np.max(np.abs(got - want)):.2e}")
