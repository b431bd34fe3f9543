"""Error functionals and the experiment record schema."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .tensor import KTensor


class MetricError(ValueError):
    pass


def mse_u(f_sampled: KTensor, x: KTensor, k: int) -> float:
    """Node-level root-mean-square error between a sampled function and a
    tensor: ||S f - n^(-k/2) x||_2.

    With the n^(-k/2) normalizer this is exactly the root of the
    per-entry mean squared difference, e.g. for k = 2 the quantity
    (n^-2 sum_ij |f(u_i,u_j) - x_ij|^2)^(1/2).
    """
    if k not in (1, 2):
        raise MetricError("supported orders: 1, 2")
    if f_sampled.data.shape != x.data.shape:
        raise MetricError("shape mismatch")
    n = x.n
    return float(np.linalg.norm(f_sampled.data - float(n) ** (-k / 2) * x.data))


def _midpoint_grid(res: int) -> np.ndarray:
    return (np.arange(res) + 0.5) / res


def graphon_l2_distance(W1, W2, base_resolution: int = 4096,
                        refine_tolerance: float = 0.01) -> float:
    """Midpoint-rule quadrature of the L2 distance between two kernels.

    The resolution doubles until the result moves by less than the
    relative tolerance (one refinement is always performed to certify
    stability).
    """
    ev1 = W1.evaluate if hasattr(W1, "evaluate") else W1
    ev2 = W2.evaluate if hasattr(W2, "evaluate") else W2

    def at(res):
        u = _midpoint_grid(res)
        diff = np.asarray(ev1(u[:, None], u[None, :])) - np.asarray(ev2(u[:, None], u[None, :]))
        return float(np.sqrt(np.mean(diff ** 2)))

    res = base_resolution
    val = at(res)
    for _ in range(3):
        nxt = at(res * 2)
        if abs(nxt - val) <= refine_tolerance * max(abs(val), 1e-15):
            return nxt
        val, res = nxt, res * 2
    return val


def diag_l2_distance(W1, W2, base_resolution: int = 4096,
                     refine_tolerance: float = 0.01) -> float:
    """Quadrature of the L2 distance between the diagonals u -> W(u,u).

    Together with graphon_l2_distance this is the continuous analog of
    the 2-tensor partition norm of W1 - W2.
    """
    ev1 = W1.evaluate if hasattr(W1, "evaluate") else W1
    ev2 = W2.evaluate if hasattr(W2, "evaluate") else W2

    def at(res):
        u = _midpoint_grid(res)
        diff = np.asarray(ev1(u, u)) - np.asarray(ev2(u, u))
        return float(np.sqrt(np.mean(diff ** 2)))

    res = base_resolution
    val = at(res)
    for _ in range(3):
        nxt = at(res * 2)
        if abs(nxt - val) <= refine_tolerance * max(abs(val), 1e-15):
            return nxt
        val, res = nxt, res * 2
    return val


def loglog_slope(points) -> float:
    """Least-squares slope of log(error) against log(n)."""
    pts = [(float(n), float(e)) for n, e in points]
    if len(pts) < 3:
        raise MetricError("need at least 3 points")
    if any(e <= 0 for _, e in pts):
        raise MetricError("errors must be positive for a log-log fit")
    xs = np.log([n for n, _ in pts])
    ys = np.log([e for _, e in pts])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


@dataclass(frozen=True)
class ErrorRecord:
    """One measurement row of the experiment CSV."""

    model_id: str
    graphon: str
    mode: str
    n: int
    seed: int
    metric: str
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise MetricError("record value must be finite")


CSV_HEADER = ["model_id", "graphon", "mode", "n", "seed", "metric", "value"]


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([r.model_id, r.graphon, r.mode, r.n, r.seed, r.metric,
                         repr(r.value)])
    return buf.getvalue()


def records_from_csv(text: str):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise MetricError(f"unexpected CSV header {header}")
    return [
        ErrorRecord(row[0], row[1], row[2], int(row[3]), int(row[4]), row[5],
                    float(row[6]))
        for row in reader
    ]
