"""Invariant graph networks on graphon-sampled graphs.

Submodules:
  partitions  — set partitions of [k] and input/output decompositions
  tensor      — dense order-k multichannel tensors and the partition norm
  le_basis    — linear permutation-equivariant basis operators
  ign         — network forward pass, init, continuous surrogate
  graphon     — graphon models, sampling regimes, sampling operators
  smoothing   — edge-probability estimation from 0-1 graphs
  metrics     — error functionals and the experiment record schema
  sgnn        — spectral GNN baseline
  experiments — convergence-experiment harness
"""

from .partitions import Partition, bell, enumerate_partitions, format_partition
from .tensor import KTensor, partition_norm, tensor_slice
from .le_basis import LEBasisOp, apply_basis, basis_ops, build_basis_matrix
from .graphon import (GraphonModel, constant_graphon, graphon_from_spec,
                      induce_graphon, lipschitz_affine_graphon,
                      piecewise_mod_graphon, sample_bernoulli, sample_fixed,
                      sample_random_weights, sampling_operator, sbm_graphon)
from .ign import (IGNModel, LayerSpec, continuous_forward, counterexample_ign,
                  counterexample_limit, forward, graph_input, random_init)
from .smoothing import SmoothingConfig, d_2inf, neighborhood_smoothing
from .metrics import graphon_l2_distance, loglog_slope, mse_u
from .experiments import ExperimentConfig, run_experiment

__all__ = [
    "Partition", "bell", "enumerate_partitions", "format_partition",
    "KTensor", "partition_norm", "tensor_slice",
    "LEBasisOp", "apply_basis", "basis_ops", "build_basis_matrix",
    "GraphonModel", "constant_graphon", "graphon_from_spec", "induce_graphon",
    "lipschitz_affine_graphon", "piecewise_mod_graphon", "sample_bernoulli",
    "sample_fixed", "sample_random_weights", "sampling_operator", "sbm_graphon",
    "IGNModel", "LayerSpec", "continuous_forward", "counterexample_ign",
    "counterexample_limit", "forward", "graph_input", "random_init",
    "SmoothingConfig", "d_2inf", "neighborhood_smoothing",
    "graphon_l2_distance", "loglog_slope", "mse_u",
    "ExperimentConfig", "run_experiment",
]

__version__ = "0.1.0"
