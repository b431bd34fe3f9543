"""Equivariant basis operators: executor vs oracle, tables, stability."""
import numpy as np
import pytest

from ign_graphon.le_basis import (
    LEBasisOp,
    apply_basis,
    basis_ops,
    build_basis_matrix,
    closed_form_2ign,
    layer_combination,
    table_rows,
    weak_apply,
    weak_from_strict,
)
from ign_graphon.partitions import Partition, bell, enumerate_partitions
from ign_graphon.tensor import KTensor, TensorError, partition_norm, permute


def P(*blocks):
    return Partition.of(blocks)


PAIRS_SMALL = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)]


class TestOpBookkeeping:
    def test_count(self):
        for l, m in PAIRS_SMALL:
            assert len(basis_ops(l, m)) == bell(l + m)

    def test_normalization_exponent(self):
        op = LEBasisOp(P((1,), (2,), (3,)), 2, 1)
        assert op.normalization_exponent == 2
        op = LEBasisOp(P((1, 2), (3,)), 2, 1)
        assert op.normalization_exponent == 1
        op = LEBasisOp(P((1, 2, 3)), 2, 1)
        assert op.normalization_exponent == 0

    def test_matrix_forms_linearly_independent(self):
        for l, m in [(1, 1), (1, 2), (2, 1), (2, 2)]:
            n = l + m  # rank requires n >= l+m
            mats = [build_basis_matrix(g, l, m, n).reshape(-1)
                    for g in enumerate_partitions(l + m)]
            rank = np.linalg.matrix_rank(np.stack(mats))
            assert rank == bell(l + m)


class TestOracleEquivalence:
    def test_executor_matches_matrix_oracle(self):
        rng = np.random.default_rng(0)
        for l, m in PAIRS_SMALL:
            for n in (2, 3):
                for op in basis_ops(l, m):
                    M = build_basis_matrix(op.partition, l, m, n)
                    for _ in range(3):
                        X = KTensor.of(rng.normal(size=(n,) * l), order=l)
                        got = apply_basis(op, X).data.reshape(-1)
                        want = M @ X.data.reshape(-1)
                        assert np.max(np.abs(got - want)) <= 1e-10

    def test_oracle_identity_1to1(self):
        M = build_basis_matrix(P((1, 2)), 1, 1, 3)
        assert np.allclose(M, np.eye(3))

    def test_oracle_strict_offdiagonal_1to1(self):
        M = build_basis_matrix(P((1,), (2,)), 1, 1, 3)
        assert np.allclose(M, (np.ones((3, 3)) - np.eye(3)) / 3)

    def test_oracle_invariant_offdiagonal_mean(self):
        M = build_basis_matrix(P((1,), (2,), (3,)), 2, 1, 3)
        # each output slot averages the off-diagonal entries excluding
        # its own row/column under the strict pattern: for n=3 only the
        # 2 ordered pairs avoiding the output index remain, weight 1/9
        assert M.shape == (3, 9)
        assert np.isclose(M.sum(), 3 * 2 / 9)

    def test_size_cap(self):
        with pytest.raises(TensorError):
            build_basis_matrix(P((1, 2, 3, 4)), 2, 2, 100)


class TestOpProperties:
    def test_equivariance(self):
        rng = np.random.default_rng(1)
        for l, m in PAIRS_SMALL:
            for op in basis_ops(l, m):
                n = 4
                X = KTensor.of(rng.normal(size=(n,) * l), order=l)
                sigma = rng.permutation(n)
                lhs = apply_basis(op, permute(X, sigma)).data
                rhs = permute(apply_basis(op, X), sigma).data
                assert np.max(np.abs(lhs - rhs)) <= 1e-10

    def test_linearity(self):
        rng = np.random.default_rng(2)
        for l, m in [(2, 2), (1, 2), (2, 1)]:
            for op in basis_ops(l, m):
                n = 4
                X = KTensor.of(rng.normal(size=(n,) * l), order=l)
                Y = KTensor.of(rng.normal(size=(n,) * l), order=l)
                a, b = 1.7, -0.3
                comb = KTensor.of(a * X.data + b * Y.data, order=l)
                lhs = apply_basis(op, comb).data
                rhs = a * apply_basis(op, X).data + b * apply_basis(op, Y).data
                assert np.max(np.abs(lhs - rhs)) <= 1e-10

    def test_strict_identity_decomposition(self):
        # identity = strict op of {{1,3},{2,4}} plus strict diag op
        rng = np.random.default_rng(3)
        X = KTensor.of(rng.normal(size=(4, 4)), order=2)
        s1 = apply_basis(LEBasisOp(P((1, 3), (2, 4)), 2, 2), X).data
        s2 = apply_basis(LEBasisOp(P((1, 2, 3, 4)), 2, 2), X).data
        assert np.allclose(s1 + s2, X.data)

    def test_three_tensor_example(self):
        # {{1,2},{3,6},{4},{5}}: average the (1,2)-diagonal trace of the
        # input over its first two axes... concretely the output at
        # (i,j,l) is (1/n) sum_a X(a,a,l), replicated over i,j off the
        # strict pattern's excluded tuples
        n = 5
        rng = np.random.default_rng(4)
        X = KTensor.of(rng.normal(size=(n, n, n)), order=3)
        op = LEBasisOp(P((1, 2), (3, 6), (4,), (5,)), 3, 3)
        got = apply_basis(op, X).data[..., 0]
        M = build_basis_matrix(op.partition, 3, 3, n)
        want = (M @ X.data.reshape(-1)).reshape(n, n, n)
        assert np.allclose(got, want)
        # spot check one strict tuple: output axes (4,5,6) = (i,j,l) with
        # i,j,l distinct; block {3,6} aligns input axis 3 with output l,
        # and the averaged representative a must avoid {i,j,l}
        cube = X.data[..., 0]
        hand = sum(cube[a, a, 2] for a in range(n) if a not in (0, 1, 2)) / n
        assert got[0, 1, 2] == pytest.approx(hand)


class TestTables:
    def test_row_counts(self):
        assert len(table_rows(1)) == 15
        assert len(table_rows(2)) == 5
        assert len(table_rows(3)) == 5

    def test_diag_row(self):
        A = np.array([[1.0, 2.0], [3.0, 4.0]])
        out = closed_form_2ign(1, 3, KTensor.of(A, order=2)).data[..., 0]
        assert np.array_equal(out, np.diag(np.diag(A)))

    def test_diag_replication_row(self):
        v = np.array([3.0, 4.0])
        out = closed_form_2ign(2, 1, KTensor.of(v, order=1)).data[..., 0]
        assert np.array_equal(out, np.diag(v))

    def test_row_mean_hand_value(self):
        A = np.array([[1.0, 3.0], [5.0, 7.0]])
        out = closed_form_2ign(3, 2, KTensor.of(A, order=2)).data[:, 0]
        assert out == pytest.approx([2.0, 6.0])

    def test_all_mean_row(self):
        A = np.array([[1.0, 3.0], [5.0, 7.0]])
        out = closed_form_2ign(1, 10, KTensor.of(A, order=2)).data[..., 0]
        assert np.allclose(out, 4.0)

    def test_invalid_row(self):
        with pytest.raises(ValueError):
            closed_form_2ign(1, 16, KTensor.of(np.zeros((2, 2)), order=2))
        with pytest.raises(ValueError):
            closed_form_2ign(4, 1, KTensor.of(np.zeros((2, 2)), order=2))

    def test_table_fidelity_against_strict_sum(self):
        """Every closed form equals its strict-operator combination."""
        rng = np.random.default_rng(5)
        for tid, l, m in ((1, 2, 2), (2, 1, 2), (3, 2, 1)):
            for n in (3, 4, 5):
                X = KTensor.of(rng.normal(size=(n,) * l), order=l)
                for row, (gamma, _) in enumerate(table_rows(tid), start=1):
                    cf = closed_form_2ign(tid, row, X).data
                    total = np.zeros_like(cf)
                    for beta, e in weak_from_strict(gamma, l, m).items():
                        op = LEBasisOp(beta, l, m)
                        total += float(n) ** e * apply_basis(op, X).data
                    assert np.max(np.abs(cf - total)) <= 1e-10


class TestWeakFromStrict:
    def test_finest_is_itself(self):
        assert weak_from_strict(P((1, 2, 3, 4)), 2, 2) == {P((1, 2, 3, 4)): 0}

    def test_identity_pair(self):
        d = weak_from_strict(P((1, 3), (2, 4)), 2, 2)
        assert d == {P((1, 3), (2, 4)): 0, P((1, 2, 3, 4)): 0}

    def test_all_singletons_touches_everything(self):
        d = weak_from_strict(P((1,), (2,), (3,), (4,)), 2, 2)
        assert set(d) == set(enumerate_partitions(4))

    def test_exponents_against_oracle(self):
        # the weak operator matrix (membership without distinctness)
        # equals the exponent-weighted sum of strict oracle matrices
        n = 3
        for l, m in [(1, 1), (2, 1), (2, 2)]:
            for gamma in enumerate_partitions(l + m):
                dec = weak_from_strict(gamma, l, m)
                total = sum(float(n) ** e * build_basis_matrix(b, l, m, n)
                            for b, e in dec.items())
                rng = np.random.default_rng(6)
                X = KTensor.of(rng.normal(size=(n,) * l), order=l)
                wa = weak_apply(gamma, l, m, X).data.reshape(-1)
                assert np.allclose(total @ X.data.reshape(-1), wa)


class TestStability:
    """Partition-norm non-expansiveness of every basis operator."""

    @pytest.mark.parametrize("l,m", PAIRS_SMALL)
    def test_norm_never_grows(self, l, m):
        rng = np.random.default_rng(100 + 10 * l + m)
        n = 5
        for op in basis_ops(l, m):
            for _ in range(20):
                X = KTensor.of(rng.normal(size=(n,) * l), order=l)
                for kind in ("l2", "linf"):
                    eps = partition_norm(X, kind).max_component()
                    out = apply_basis(op, X)
                    got = partition_norm(out, kind).max_component()
                    assert got <= eps + 1e-9

    def test_closed_forms_are_nonexpansive(self):
        rng = np.random.default_rng(11)
        n = 6
        A = KTensor.of(rng.normal(size=(n, n)), order=2)
        eps = partition_norm(A).max_component()
        for row in range(1, 16):
            out = closed_form_2ign(1, row, A)
            assert partition_norm(out).max_component() <= eps + 1e-9


class TestLayerCombination:
    def test_matches_oracle_sum(self):
        rng = np.random.default_rng(12)
        n, l, m = 3, 2, 2
        X = rng.normal(size=(n, n, 1))
        coeffs = {g: np.ones((1, 1)) for g in enumerate_partitions(4)}
        got = layer_combination(coeffs, l, m, X)[..., 0].reshape(-1)
        M = sum(build_basis_matrix(g, l, m, n) for g in enumerate_partitions(4))
        assert np.allclose(got, M @ X[..., 0].reshape(-1))

    def test_channel_mixing(self):
        rng = np.random.default_rng(13)
        n = 4
        X = rng.normal(size=(n, n, 3))
        mat = rng.normal(size=(3, 2))
        gamma = P((1, 3), (2, 4))
        got = layer_combination({gamma: mat}, 2, 2, X)
        op = LEBasisOp(gamma, 2, 2)
        want = np.zeros((n, n, 2))
        for i in range(3):
            base = apply_basis(op, KTensor.of(X[..., i], order=2)).data[..., 0]
            for j in range(2):
                want[..., j] += mat[i, j] * base
        assert np.allclose(got, want)

    def test_invariant_output(self):
        rng = np.random.default_rng(14)
        X = rng.normal(size=(4, 4, 2))
        coeffs = {P((1,), (2,)): np.ones((2, 1))}
        out = layer_combination(coeffs, 2, 0, X)
        # off-diagonal mean per channel, summed over channels
        mask = ~np.eye(4, dtype=bool)
        want = sum(X[..., c][mask].sum() / 16 for c in range(2))
        assert out.shape == (1,)
        assert out[0] == pytest.approx(want)
