"""Command-line entry points.

Subcommands:
  basis list   — print the operator catalog for given input/output orders
  basis verify — run the oracle/equivariance self-checks, nonzero exit on failure
  smooth       — estimate edge probabilities from a 0-1 graph file
  run          — execute an experiment config into a results directory
  plot         — turn a results directory into per-curve series (csv or svg)
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np


def _cmd_basis_list(args) -> int:
    from .le_basis import basis_ops, table_rows
    from .partitions import format_partition

    l, m = args.lin, args.lout
    ops = basis_ops(l, m)
    table_id = {(2, 2): 1, (1, 2): 2, (2, 1): 3}.get((l, m))
    descs = dict(table_rows(table_id)) if table_id else {}
    print(f"# {len(ops)} basis operators for order {l} -> order {m}")
    for op in ops:
        line = f"{format_partition(op.partition):24s} reduction axes: {op.normalization_exponent}"
        if op.partition in descs:
            line += f"  [{descs[op.partition]}]"
        print(line)
    return 0


def _cmd_basis_verify(args) -> int:
    from .le_basis import (apply_basis, basis_ops, build_basis_matrix,
                           closed_form_2ign, table_rows, weak_apply)
    from .tensor import KTensor, permute

    rng = np.random.default_rng(args.seed)
    failures = 0
    pairs = [(l, m) for l in (1, 2, 3) for m in (1, 2, 3) if l + m <= args.max_order]
    for l, m in pairs:
        for n in (2, 3):
            for op in basis_ops(l, m):
                X = KTensor.of(rng.normal(size=(n,) * l), order=l)
                got = apply_basis(op, X).data.reshape(-1)
                want = build_basis_matrix(op.partition, l, m, n) @ X.data.reshape(-1)
                if np.max(np.abs(got - want)) > 1e-10:
                    print(f"FAIL oracle {op.partition} l={l} m={m} n={n}")
                    failures += 1
                sigma = rng.permutation(n)
                lhs = apply_basis(op, permute(X, sigma)).data
                rhs = permute(apply_basis(op, X), sigma).data
                if np.max(np.abs(lhs - rhs)) > 1e-10:
                    print(f"FAIL equivariance {op.partition} l={l} m={m} n={n}")
                    failures += 1
    for tid, l, m in ((1, 2, 2), (2, 1, 2), (3, 2, 1)):
        X = KTensor.of(rng.normal(size=(n,) * l), order=l)
        for row, (gamma, _) in enumerate(table_rows(tid), start=1):
            cf = closed_form_2ign(tid, row, X).data
            wk = weak_apply(gamma, l, m, X).data
            if np.max(np.abs(cf - wk)) > 1e-10:
                print(f"FAIL table {tid} row {row}")
                failures += 1
    print("basis verify:", "FAILED" if failures else "ok",
          f"({failures} failures)" if failures else "")
    return 1 if failures else 0


def _cmd_smooth(args) -> int:
    from .smoothing import SmoothingConfig, neighborhood_smoothing
    from .tensor import KTensor, load_tensor, save_tensor

    X = load_tensor(args.input)
    if X.order != 2 or X.channels != 1:
        print("smooth: input must be a single-channel order-2 tensor", file=sys.stderr)
        return 2
    P = neighborhood_smoothing(X.data[..., 0], SmoothingConfig(args.c))
    out = args.output or args.input + ".smoothed"
    save_tensor(KTensor.of(P, order=2), out)
    print(f"wrote {out}")
    return 0


def _cmd_run(args) -> int:
    from .experiments import ExperimentConfig, parse_config, run_experiment

    if args.config:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    else:
        cfg = ExperimentConfig()
    run_experiment(cfg, out_dir=args.out)
    print(f"wrote {os.path.join(args.out, 'records.csv')}")
    return 0


def _curves(records):
    from .experiments import median_curve

    keys = sorted({(r.graphon, r.mode, r.metric) for r in records})
    return [(g, mode, metric, median_curve(records, g, mode, metric))
            for g, mode, metric in keys]


def _cmd_plot(args) -> int:
    from .metrics import records_from_csv

    with open(os.path.join(args.indir, "records.csv")) as fh:
        records = records_from_csv(fh.read())
    curves = _curves(records)
    sizes = sorted({r.n for r in records})
    guides = []
    for label, expo in (("n^-0.5", -0.5), ("n^-1", -1.0), ("n^-2", -2.0)):
        anchor = max(e for *_ignore, curve in curves for _, e in curve)
        guides.append((label, [(n, anchor * (n / sizes[0]) ** expo) for n in sizes]))
    if args.format == "csv":
        out = os.path.join(args.indir, "curves.csv")
        with open(out, "w") as fh:
            fh.write("graphon,mode,metric,n,median\n")
            for g, mode, metric, curve in curves:
                for n, e in curve:
                    fh.write(f"{g},{mode},{metric},{n},{e!r}\n")
            for label, pts in guides:
                for n, e in pts:
                    fh.write(f"guide,{label},guide,{n},{e!r}\n")
        print(f"wrote {out}")
        return 0
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("plot: matplotlib not installed; use --format csv", file=sys.stderr)
        return 2
    graphons = sorted({g for g, _, metric, _ in curves if metric == "output_l2"})
    fig, axes = plt.subplots(1, len(graphons), figsize=(4 * len(graphons), 4),
                             squeeze=False)
    for ax, g in zip(axes[0], graphons):
        for gg, mode, metric, curve in curves:
            if gg != g or metric != "output_l2" or not curve:
                continue
            ns, es = zip(*curve)
            ax.loglog(ns, es, marker="o", label=mode)
        for label, pts in guides:
            ns, es = zip(*pts)
            ax.loglog(ns, es, ls="--", lw=0.8, color="gray")
        ax.set_title(g)
        ax.set_xlabel("n")
        ax.legend(fontsize=7)
    out = os.path.join(args.indir, "curves.svg")
    fig.tight_layout()
    fig.savefig(out)
    print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ign-graphon")
    sub = parser.add_subparsers(dest="command", required=True)

    p_basis = sub.add_parser("basis", help="equivariant operator catalog")
    basis_sub = p_basis.add_subparsers(dest="basis_command", required=True)
    p_list = basis_sub.add_parser("list")
    p_list.add_argument("--lin", type=int, required=True)
    p_list.add_argument("--lout", type=int, required=True)
    p_list.set_defaults(func=_cmd_basis_list)
    p_verify = basis_sub.add_parser("verify")
    p_verify.add_argument("--max-order", type=int, default=4)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=_cmd_basis_verify)

    p_smooth = sub.add_parser("smooth", help="edge-probability estimation")
    p_smooth.add_argument("--input", required=True)
    p_smooth.add_argument("--output")
    p_smooth.add_argument("--c", type=float, default=1.0)
    p_smooth.set_defaults(func=_cmd_smooth)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("--config")
    p_run.add_argument("--out", required=True)
    p_run.set_defaults(func=_cmd_run)

    p_plot = sub.add_parser("plot", help="summarize a results directory")
    p_plot.add_argument("--in", dest="indir", required=True)
    p_plot.add_argument("--format", choices=("csv", "svg"), default="csv")
    p_plot.set_defaults(func=_cmd_plot)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
