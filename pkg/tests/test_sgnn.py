"""Spectral GNN baseline: normalization, forward pass, equivariance."""
import numpy as np
import pytest

from ign_graphon.graphon import (grid_points, induce_graphon,
                                 sample_bernoulli, sbm_graphon)
from ign_graphon.sgnn import (
    SGNNError,
    SGNNLayer,
    SGNNModel,
    normalized_adjacency,
    random_sgnn,
    sgnn_forward,
)


class TestNormalizedAdjacency:
    def test_all_ones(self):
        n = 5
        L = normalized_adjacency(np.ones((n, n)), 0.5)
        assert np.allclose(L, np.ones((n, n)) / n)

    def test_zero_row_rejected(self):
        A = np.ones((4, 4))
        A[0] = 0
        A[:, 0] = 0
        with pytest.raises(SGNNError):
            normalized_adjacency(A, 1e-3)

    def test_spectral_norm_bounded(self):
        for seed in range(3):
            g = sample_bernoulli(sbm_graphon(), 128, seed)
            L = normalized_adjacency(g.weights, 1e-4)
            assert np.max(np.abs(np.linalg.eigvalsh(L))) <= 1.0 + 1e-10

    def test_asymmetric_rejected(self):
        A = np.ones((4, 4))
        A[0, 1] = 2.0
        with pytest.raises(SGNNError):
            normalized_adjacency(A, 1e-3)


class TestForward:
    def test_degree_zero_identity(self):
        n = 6
        A = np.ones((n, n))
        beta = np.zeros((1, 1, 1))
        beta[0, 0, 0] = 1.0
        model = SGNNModel((SGNNLayer(beta, np.zeros(1)),))
        x = np.abs(np.random.default_rng(0).normal(size=n))
        out = sgnn_forward(model, A, x)
        assert np.allclose(out[:, 0], x)  # ReLU on non-negative input

    def test_single_power(self):
        n = 5
        A = np.ones((n, n))
        beta = np.zeros((1, 1, 2))
        beta[0, 0, 1] = 1.0  # h(lambda) = lambda
        model = SGNNModel((SGNNLayer(beta, np.zeros(1)),))
        x = np.abs(np.random.default_rng(1).normal(size=n))
        L = normalized_adjacency(A, 1e-6)
        assert np.allclose(sgnn_forward(model, A, x)[:, 0],
                           np.maximum(L @ x, 0))

    def test_horner_matches_explicit_powers(self):
        rng = np.random.default_rng(2)
        g = sample_bernoulli(sbm_graphon(), 32, 2)
        A = g.weights
        L = normalized_adjacency(A, 1e-6)
        beta = rng.normal(size=(2, 3, 4))
        model = SGNNModel((SGNNLayer(beta, np.zeros(3)),), activation="identity")
        x = rng.normal(size=(32, 2))
        got = sgnn_forward(model, A, x)
        want = np.zeros((32, 3))
        for k in range(4):
            Lk = np.linalg.matrix_power(L, k)
            want += Lk @ x @ beta[:, :, k]
        assert np.max(np.abs(got - want)) <= 1e-10

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(3)
        g = sample_bernoulli(sbm_graphon(), 48, 4)
        A = g.weights
        x = rng.normal(size=48)
        model = random_sgnn([1, 4, 2], degree=3, seed=0)
        sigma = rng.permutation(48)
        Ap = A[np.ix_(sigma, sigma)]
        lhs = sgnn_forward(model, Ap, x[sigma])
        rhs = sgnn_forward(model, A, x)[sigma]
        assert np.max(np.abs(lhs - rhs)) <= 1e-10

    def test_blowup_commutation(self):
        """Evaluating on the fine-grid sample of the induced step graphon
        replicates the coarse output block-wise (grid-sampling
        commutation for step-function inputs)."""
        rng = np.random.default_rng(5)
        n, r = 16, 8
        g = sample_bernoulli(sbm_graphon(), n, 6)
        x = rng.normal(size=n)
        model = random_sgnn([1, 3, 1], degree=2, seed=1)
        coarse = sgnn_forward(model, g.weights, x)
        Wbar = induce_graphon(g, "equal-blocks")
        fine_weights = Wbar.weight_matrix(grid_points(n * r))
        fine = sgnn_forward(model, fine_weights, np.repeat(x, r))
        assert np.max(np.abs(fine - np.repeat(coarse, r, axis=0))) <= 1e-9

    def test_chain_mismatch(self):
        beta = np.zeros((2, 2, 1))
        model = SGNNModel((SGNNLayer(beta, np.zeros(2)),))
        with pytest.raises(SGNNError):
            sgnn_forward(model, np.ones((4, 4)), np.ones(4))

    def test_reproducible_init(self):
        a = random_sgnn([1, 3], 2, seed=5)
        b = random_sgnn([1, 3], 2, seed=5)
        assert np.array_equal(a.layers[0].beta, b.layers[0].beta)
