"""Graphon models, node signals, sampling regimes, and sampling operators.

A graphon is a symmetric measurable kernel W: [0,1]^2 -> [0,1]; graphs
are obtained by evaluating W at latent points (edge-weight models) or by
flipping Bernoulli coins with those values (edge-probability model).
Piecewise-constant graphons induced by a finite graph close the loop in
the other direction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .tensor import KTensor


class GraphonError(ValueError):
    pass


@dataclass(frozen=True)
class GraphonModel:
    """Evaluable symmetric kernel with values in [0,1].

    kind is one of constant | sbm | lipschitz_affine | piecewise_mod |
    grid. The grid kind is piecewise constant on cells ((i-1)/n, i/n]
    (or on latent intervals) and carries its value matrix; evaluating it
    at right endpoints i/n reproduces the matrix exactly, which the
    sampling-commutation identities rely on.
    """

    kind: str
    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    lipschitz_constant_hint: float | None = None
    params: dict = field(default_factory=dict)

    def evaluate(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        w = np.asarray(self.evaluator(u, v), dtype=np.float64)
        return w

    def weight_matrix(self, latents: np.ndarray) -> np.ndarray:
        u = np.asarray(latents)
        return self.evaluate(u[:, None], u[None, :])


def constant_graphon(p: float) -> GraphonModel:
    if not 0.0 <= p <= 1.0:
        raise GraphonError("constant value must lie in [0,1]")
    return GraphonModel("constant", lambda u, v: np.broadcast_arrays(u, v)[0] * 0 + p,
                        lipschitz_constant_hint=0.0, params={"p": p})


def sbm_graphon(prob_matrix=None, block_sizes=None) -> GraphonModel:
    """Stochastic block model; default two equal blocks with
    probabilities [[0.1, 0.25], [0.25, 0.4]]."""
    P = np.asarray(prob_matrix if prob_matrix is not None else [[0.1, 0.25], [0.25, 0.4]],
                   dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or not np.allclose(P, P.T):
        raise GraphonError("probability matrix must be square symmetric")
    if np.any(P < 0) or np.any(P > 1):
        raise GraphonError("block probabilities must lie in [0,1]")
    b = P.shape[0]
    sizes = np.asarray(block_sizes if block_sizes is not None else np.full(b, 1.0 / b))
    if len(sizes) != b or not np.isclose(sizes.sum(), 1.0):
        raise GraphonError("block sizes must sum to 1")
    edges = np.concatenate([[0.0], np.cumsum(sizes)])
    edges[-1] = 1.0

    def ev(u, v):
        iu = np.clip(np.searchsorted(edges, u, side="right") - 1, 0, b - 1)
        iv = np.clip(np.searchsorted(edges, v, side="right") - 1, 0, b - 1)
        return P[iu, iv]

    return GraphonModel("sbm", ev, params={"prob_matrix": P, "block_sizes": sizes})


def lipschitz_affine_graphon() -> GraphonModel:
    """W(u,v) = (u + v + 1)/4, Lipschitz with a conservative hint A1 = 1/2."""
    return GraphonModel("lipschitz_affine", lambda u, v: (u + v + 1.0) / 4.0,
                        lipschitz_constant_hint=0.5)


def piecewise_mod_graphon() -> GraphonModel:
    """W(u,v) = ((u mod 1/3) + (v mod 1/3) + 1)/4 with right-open cells at
    the breakpoints 1/3, 2/3."""

    def frac(u):
        t = np.mod(np.asarray(u, dtype=np.float64) * 3.0, 1.0) / 3.0
        return t

    return GraphonModel("piecewise_mod", lambda u, v: (frac(u) + frac(v) + 1.0) / 4.0,
                        lipschitz_constant_hint=0.5)


def grid_graphon(values: np.ndarray, breakpoints=None) -> GraphonModel:
    """Piecewise-constant graphon; cell i is ((b_{i-1}, b_i]].

    Default breakpoints i/n (equal blocks). The cell of u is found with
    a right-closed convention so that W(i/n, j/n) = values[i-1, j-1].
    """
    V = np.asarray(values, dtype=np.float64)
    if V.ndim != 2 or V.shape[0] != V.shape[1]:
        raise GraphonError("grid values must be square")
    if not np.allclose(V, V.T):
        raise GraphonError("grid values must be symmetric")
    n = V.shape[0]
    if breakpoints is None:
        edges = np.arange(1, n) / n
    else:
        edges = np.asarray(breakpoints, dtype=np.float64)
        if len(edges) != n - 1 or np.any(np.diff(edges) < 0):
            raise GraphonError("need n-1 ascending interior breakpoints")

    def ev(u, v):
        iu = np.searchsorted(edges, u, side="left")
        iv = np.searchsorted(edges, v, side="left")
        return V[np.clip(iu, 0, n - 1), np.clip(iv, 0, n - 1)]

    return GraphonModel("grid", ev, params={"values": V, "breakpoints": edges})


def grid_signal(values: np.ndarray, breakpoints=None) -> Callable:
    """1-D piecewise-constant lift of a node signal (same cell convention)."""
    v = np.asarray(values, dtype=np.float64)
    n = len(v)
    edges = np.arange(1, n) / n if breakpoints is None else np.asarray(breakpoints)

    def ev(u):
        return v[np.clip(np.searchsorted(edges, u, side="left"), 0, n - 1)]

    return ev


def graphon_from_spec(text: str) -> GraphonModel:
    """Parse 'kind[:key=value,...]' graphon descriptions used in configs.

    Supported: er[:p=0.1], sbm, lipschitz_affine, piecewise_mod.
    """
    name, _, rest = text.strip().partition(":")
    opts = {}
    if rest:
        for item in rest.split(","):
            k, _, v = item.partition("=")
            opts[k.strip()] = float(v)
    if name in ("er", "constant"):
        return constant_graphon(opts.get("p", 0.1))
    if name == "sbm":
        return sbm_graphon()
    if name == "lipschitz_affine":
        return lipschitz_affine_graphon()
    if name == "piecewise_mod":
        return piecewise_mod_graphon()
    raise GraphonError(f"unknown graphon spec {text!r}")


@dataclass(frozen=True)
class SampledGraph:
    """A graph sampled from a graphon at latent points."""

    weights: np.ndarray  # n x n symmetric
    latents: np.ndarray  # sorted ascending in [0,1]
    signal: np.ndarray | None  # n (x d) or None
    mode: str  # deterministic-grid | random-latent | bernoulli

    @property
    def n(self) -> int:
        return len(self.latents)


def _eval_signal(X, latents):
    if X is None:
        return None
    return np.asarray(X(latents), dtype=np.float64)


def fixed_latents(n: int) -> np.ndarray:
    return (np.arange(n)) / n  # u_i = (i-1)/n, 1-based


def sample_fixed(W: GraphonModel, n: int, X=None) -> SampledGraph:
    """Deterministic grid sample at u_i = (i-1)/n."""
    if n < 2:
        raise GraphonError("need n >= 2")
    u = fixed_latents(n)
    return SampledGraph(W.weight_matrix(u), u, _eval_signal(X, u), "deterministic-grid")


def sample_random_weights(W: GraphonModel, n: int, seed, X=None) -> SampledGraph:
    """Edge-weight sample at sorted i.i.d. uniform latents."""
    if n < 2:
        raise GraphonError("need n >= 2")
    rng = np.random.default_rng(seed)
    u = np.sort(rng.uniform(size=n))
    return SampledGraph(W.weight_matrix(u), u, _eval_signal(X, u), "random-latent")


def sample_bernoulli(W: GraphonModel, n: int, seed, X=None,
                     zero_diagonal: bool = False) -> SampledGraph:
    """0-1 sample: entry (i,j), i <= j, is Bernoulli(W(u_i,u_j)), mirrored.

    Self-loops are sampled like any pair unless zero_diagonal is set.
    """
    if n < 2:
        raise GraphonError("need n >= 2")
    rng = np.random.default_rng(seed)
    u = np.sort(rng.uniform(size=n))
    P = W.weight_matrix(u)
    coins = rng.uniform(size=(n, n))
    upper = np.triu(np.ones((n, n), dtype=bool))
    A = np.zeros((n, n))
    A[upper] = (coins[upper] < P[upper]).astype(np.float64)
    A = A + np.triu(A, 1).T
    if zero_diagonal:
        np.fill_diagonal(A, 0.0)
    return SampledGraph(A, u, _eval_signal(X, u), "bernoulli")


def induce_graphon(g: SampledGraph, block_mode: str = "equal-blocks") -> GraphonModel:
    """Lift a sampled graph back to a piecewise-constant graphon.

    latent-intervals: cell boundaries at the sorted latents; equal-blocks:
    boundaries at i/n (the chessboard lift used by the sampling-operator
    identities).
    """
    n = g.n
    if block_mode == "equal-blocks":
        return grid_graphon(g.weights)
    if block_mode == "latent-intervals":
        # cell i covers (u_i, u_{i+1}] with the first cell starting at 0
        edges = g.latents[1:]
        return grid_graphon(g.weights, breakpoints=edges)
    raise GraphonError(f"unknown block mode {block_mode!r}")


def induce_signal(g: SampledGraph, block_mode: str = "equal-blocks") -> Callable:
    if g.signal is None:
        raise GraphonError("sampled graph has no signal")
    if block_mode == "equal-blocks":
        return grid_signal(g.signal)
    return grid_signal(g.signal, breakpoints=g.latents[1:])


def sampling_operator(f, points, k: int) -> KTensor:
    """Normalized point evaluation: (S f)(i_1..i_k) = n^(-k/2) f(points...).

    Pass latents for the random-latent operator or the grid i/n for the
    fixed-grid operator (grid_points below).
    """
    if k not in (1, 2):
        raise GraphonError("sampling operator supports orders 1 and 2")
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    if k == 1:
        vals = np.asarray(f(pts), dtype=np.float64)
    else:
        f_eval = f.evaluate if isinstance(f, GraphonModel) else f
        vals = np.asarray(f_eval(pts[:, None], pts[None, :]), dtype=np.float64)
    return KTensor.of(vals * float(n) ** (-k / 2), order=k)


def grid_points(n: int) -> np.ndarray:
    """Evaluation grid i/n of the fixed-grid sampling operator."""
    return np.arange(1, n + 1) / n
