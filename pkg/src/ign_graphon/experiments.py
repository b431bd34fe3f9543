"""Convergence-experiment harness: error-vs-size curves for the four
sampling regimes, plus the thresholded-counterexample divergence demo.

For each (graphon, mode, size, trial) the harness builds a graph input,
pushes it through one shared random-initialized network, and measures
the Euclidean distance between the invariant output and the fine-grid
ground truth. Everything is reproducible from the config: per-trial
seeds are derived from (base_seed, mode family, n, trial), with the two
edge-probability modes sharing a family so they see the same Bernoulli
samples and compare pairwise.
"""
from __future__ import annotations

import datetime
import os
import statistics
from dataclasses import dataclass, replace

import numpy as np

from .graphon import (GraphonModel, graphon_from_spec, sample_bernoulli,
                      sample_fixed, sample_random_weights)
from .ign import (continuous_forward, counterexample_ign, counterexample_limit,
                  forward, graph_input, random_init, serialize_model)
from .metrics import ErrorRecord, loglog_slope, records_to_csv
from .smoothing import SmoothingConfig, d_2inf, neighborhood_smoothing

MODES = ("ew-fixed", "ew-random", "ep-raw", "ep-smoothed")
# seed-derivation family per mode; both EP modes share one family so a
# trial's Bernoulli sample is identical across them
_MODE_FAMILY = {"ew-fixed": 0, "ew-random": 1, "ep-raw": 2, "ep-smoothed": 2}

DEFAULT_GRAPHONS = ("er:p=0.1", "sbm", "lipschitz_affine", "piecewise_mod")
DEFAULT_SIZES = (32, 64, 128, 256, 512, 1024)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    graphons: tuple = DEFAULT_GRAPHONS
    sizes: tuple = DEFAULT_SIZES
    modes: tuple = MODES
    trials: int = 10
    base_seed: int = 0
    model_seed: int = 5
    n_layers: int = 5
    hidden: int = 16
    a2_bound: float = 1.0
    n_ref: int = 2048
    ground_truth_mode: str = "grid"
    ground_truth_samples: int = 8  # random-averaged mode only
    smoothing_c: float = 1.0
    zero_diagonal: bool = False
    activation: str = "relu"

    def validate(self) -> None:
        problems = []
        if list(self.sizes) != sorted(set(self.sizes)):
            problems.append("sizes must be strictly ascending")
        if any(n < 2 for n in self.sizes):
            problems.append("sizes must be >= 2")
        if self.trials < 1:
            problems.append("trials must be >= 1")
        unknown = [m for m in self.modes if m not in MODES]
        if unknown:
            problems.append(f"unknown modes: {unknown}")
        if self.sizes and self.n_ref < 2 * max(self.sizes):
            problems.append("n_ref must be at least twice the largest size")
        if self.ground_truth_mode not in ("grid", "random-averaged"):
            problems.append(f"unknown ground_truth_mode {self.ground_truth_mode!r}")
        if not 0 < self.smoothing_c <= 1:
            problems.append("smoothing_c must lie in (0, 1]")
        for g in self.graphons:
            try:
                graphon_from_spec(g)
            except Exception as exc:
                problems.append(f"bad graphon spec {g!r}: {exc}")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def arch(self):
        return tuple([(2, 2)] + [(2, self.hidden)] * self.n_layers)

    def to_text(self) -> str:
        lines = [
            "graphons = " + " ".join(self.graphons),
            "sizes = " + " ".join(str(n) for n in self.sizes),
            "modes = " + " ".join(self.modes),
            f"trials = {self.trials}",
            f"base_seed = {self.base_seed}",
            f"model_seed = {self.model_seed}",
            f"n_layers = {self.n_layers}",
            f"hidden = {self.hidden}",
            f"a2_bound = {self.a2_bound}",
            f"n_ref = {self.n_ref}",
            f"ground_truth_mode = {self.ground_truth_mode}",
            f"ground_truth_samples = {self.ground_truth_samples}",
            f"smoothing_c = {self.smoothing_c}",
            f"zero_diagonal = {self.zero_diagonal}",
            f"activation = {self.activation}",
            "signal = identity",  # X(u) = u, recorded for reproducibility
        ]
        return "\n".join(lines) + "\n"


def parse_config(text: str) -> ExperimentConfig:
    """Parse the key-value config format written by to_text."""
    cfg = ExperimentConfig()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "graphons":
            cfg = replace(cfg, graphons=tuple(value.split()))
        elif key == "sizes":
            cfg = replace(cfg, sizes=tuple(int(v) for v in value.split()))
        elif key == "modes":
            cfg = replace(cfg, modes=tuple(value.split()))
        elif key in ("trials", "base_seed", "model_seed", "n_layers", "hidden",
                     "n_ref", "ground_truth_samples"):
            cfg = replace(cfg, **{key: int(value)})
        elif key in ("a2_bound", "smoothing_c"):
            cfg = replace(cfg, **{key: float(value)})
        elif key == "zero_diagonal":
            cfg = replace(cfg, zero_diagonal=value.lower() in ("true", "1", "yes"))
        elif key in ("ground_truth_mode", "activation"):
            cfg = replace(cfg, **{key: value})
        elif key == "signal":
            if value != "identity":
                raise ConfigError("only the identity signal X(u) = u is shipped")
        else:
            raise ConfigError(f"unknown config key {key!r}")
    cfg.validate()
    return cfg


def _signal(u):
    return u


def derive_seed(base_seed: int, family: int, n: int, trial: int) -> int:
    """Stable per-trial seed: no sequential RNG state shared across trials."""
    state = np.random.SeedSequence([base_seed, family, n, trial]).generate_state(1)
    return int(state[0])


def _ground_truth(model, W: GraphonModel, cfg: ExperimentConfig) -> np.ndarray:
    if cfg.ground_truth_mode == "grid":
        return continuous_forward(model, W, _signal, cfg.n_ref).data
    outs = []
    for r in range(cfg.ground_truth_samples):
        seed = derive_seed(cfg.base_seed, 3, cfg.n_ref, r)
        g = sample_random_weights(W, cfg.n_ref, seed, _signal)
        outs.append(forward(model, graph_input(g.weights, g.signal)).data)
    return np.mean(outs, axis=0)


def run_experiment(cfg: ExperimentConfig, out_dir=None):
    """Run the full grid; returns (records, summary rows).

    If out_dir is given, writes records.csv, summary.csv (per-curve
    log-log slopes of the median error), and config.snapshot there.
    """
    cfg.validate()
    model = random_init(cfg.arch, cfg.a2_bound, cfg.model_seed,
                        activation=cfg.activation,
                        model_id=f"ign-l{cfg.n_layers}w{cfg.hidden}s{cfg.model_seed}")
    smooth_cfg = SmoothingConfig(cfg.smoothing_c)
    records = []
    for gspec in cfg.graphons:
        W = graphon_from_spec(gspec)
        gname = gspec.split(":")[0]
        truth = _ground_truth(model, W, cfg)
        for n in cfg.sizes:
            # deterministic-grid error is trial-independent; computed once
            ew_fixed_err = None
            if "ew-fixed" in cfg.modes:
                g = sample_fixed(W, n, _signal)
                y = forward(model, graph_input(g.weights, g.signal)).data
                ew_fixed_err = float(np.linalg.norm(y - truth))
            for trial in range(cfg.trials):
                if ew_fixed_err is not None:
                    records.append(ErrorRecord(model.model_id, gname, "ew-fixed",
                                               n, trial, "output_l2", ew_fixed_err))
                if "ew-random" in cfg.modes:
                    seed = derive_seed(cfg.base_seed, _MODE_FAMILY["ew-random"], n, trial)
                    g = sample_random_weights(W, n, seed, _signal)
                    y = forward(model, graph_input(g.weights, g.signal)).data
                    records.append(ErrorRecord(model.model_id, gname, "ew-random",
                                               n, seed, "output_l2",
                                               float(np.linalg.norm(y - truth))))
                if "ep-raw" in cfg.modes or "ep-smoothed" in cfg.modes:
                    seed = derive_seed(cfg.base_seed, _MODE_FAMILY["ep-raw"], n, trial)
                    g = sample_bernoulli(W, n, seed, _signal,
                                         zero_diagonal=cfg.zero_diagonal)
                    if "ep-raw" in cfg.modes:
                        y = forward(model, graph_input(g.weights, g.signal)).data
                        records.append(ErrorRecord(model.model_id, gname, "ep-raw",
                                                   n, seed, "output_l2",
                                                   float(np.linalg.norm(y - truth))))
                    if "ep-smoothed" in cfg.modes:
                        P_hat = neighborhood_smoothing(g.weights, smooth_cfg)
                        y = forward(model, graph_input(P_hat, g.signal)).data
                        records.append(ErrorRecord(model.model_id, gname,
                                                   "ep-smoothed", n, seed,
                                                   "output_l2",
                                                   float(np.linalg.norm(y - truth))))
                        P_true = W.weight_matrix(g.latents)
                        records.append(ErrorRecord(model.model_id, gname,
                                                   "ep-smoothed", n, seed, "d2inf",
                                                   d_2inf(P_hat, P_true)))
    records.sort(key=lambda r: (r.graphon, r.mode, r.metric, r.n, r.seed))
    summary = summarize(records, cfg)
    if out_dir is not None:
        write_results(out_dir, cfg, model, records, summary)
    return records, summary


def median_curve(records, graphon: str, mode: str, metric: str = "output_l2"):
    """(n, median value) points of one curve."""
    by_n: dict[int, list[float]] = {}
    for r in records:
        if (r.graphon, r.mode, r.metric) == (graphon, mode, metric):
            by_n.setdefault(r.n, []).append(r.value)
    return sorted((n, statistics.median(v)) for n, v in by_n.items())


def summarize(records, cfg: ExperimentConfig):
    """Per-curve log-log slope rows: (model_id, graphon, mode, metric, slope)."""
    rows = []
    seen = sorted({(r.model_id, r.graphon, r.mode, r.metric) for r in records})
    for model_id, graphon, mode, metric in seen:
        curve = median_curve(records, graphon, mode, metric)
        if len(curve) >= 3 and all(e > 0 for _, e in curve):
            slope = loglog_slope(curve)
        else:
            slope = float("nan")
        rows.append((model_id, graphon, mode, metric, slope))
    return rows


def summary_to_csv(summary) -> str:
    lines = ["model_id,graphon,mode,metric,slope"]
    for model_id, graphon, mode, metric, slope in summary:
        lines.append(f"{model_id},{graphon},{mode},{metric},{slope!r}")
    return "\n".join(lines) + "\n"


def write_results(out_dir, cfg: ExperimentConfig, model, records, summary) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "records.csv"), "w") as fh:
        fh.write(records_to_csv(records))
    with open(os.path.join(out_dir, "summary.csv"), "w") as fh:
        fh.write(summary_to_csv(summary))
    snapshot = (
        cfg.to_text()
        + serialize_model(model, cfg.arch, cfg.model_seed, cfg.a2_bound)
        + f"timestamp = {datetime.datetime.now().isoformat()}\n"
    )
    with open(os.path.join(out_dir, "config.snapshot"), "w") as fh:
        fh.write(snapshot)


def counterexample_gap(c_max: float = 0.5, p: float = 0.1,
                       sizes=(128, 1024), n_seeds: int = 10,
                       base_seed: int = 0):
    """Mean output gap of the thresholded model on 0-1 samples of the
    constant graphon, per size, with its analytic limit.

    The continuous output is identically zero, so the gap equals the
    model output; it converges to a positive constant instead of zero.
    """
    from .graphon import constant_graphon

    model = counterexample_ign(c_max)
    W = constant_graphon(p)
    phi_c = continuous_forward(model, W, None, 256).data
    gaps = {}
    for n in sizes:
        vals = []
        for trial in range(n_seeds):
            seed = derive_seed(base_seed, 4, n, trial)
            g = sample_bernoulli(W, n, seed)
            y = forward(model, graph_input(g.weights, None)).data
            vals.append(float(np.linalg.norm(y - phi_c)))
        gaps[n] = float(np.mean(vals))
    return gaps, counterexample_limit(c_max, p)
